#pragma once

#include <string>
#include <vector>

#include "wo/project.hpp"
#include "wo/sp.hpp"

namespace wo {

/// Overlap graph of a redex set: one node per redex, an edge per overlapping
/// pair; Y-clusters are shaded.
std::string overlap_graph_dot(const TRS& trs, const std::vector<Redex>& redexes,
                              const std::string& graph_name = "overlaps");

/// A linear reduction chain as a DOT digraph; terms are truncated for labels.
std::string reduction_dot(const std::vector<RewriteStep>& steps, int label_depth = 6);

/// The two-row tiling diagram of a strip computation.
std::string strip_diagram_dot(const TRS& trs, const StripResult& res,
                              const std::vector<RewriteStep>& top_steps, int label_depth = 4,
                              long max_columns = 10);

/// CSV rendering of the prefix-sum walk: header then index,sum rows.
std::string sum_graph_csv(const SPWord& w, long n);

}  // namespace wo
