#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wo/redex.hpp"

namespace wo {

/// Remove overlaps between two co-initial parallel steps by replacing, for
/// every overlap, the outermost redex with the innermost one (left-most among
/// the top-most if several), and for two redexes at the same position the
/// second step's redex with the first step's. Targets of both steps are
/// preserved and verified.
///
/// Periodic steps are accepted only when they are already conflict-free.
std::pair<ParallelStep, ParallelStep> orthogonalize_parallel(const TRS& trs,
                                                             const ParallelStep& alpha,
                                                             const ParallelStep& beta);

/// Remove from `dev` every redex that is a Y-redex with respect to the
/// combined `context` set (context must contain dev). The development target
/// is unchanged.
Development drop_y_redexes(const TRS& trs, const Development& dev, const RedexSet& context);

enum class OrthoCase {
    ReplaceOnlyPartner,   // (i)   v is the only redex overlapping u: v := u
    DropDisjointPair,     // (ii)  v,w disjoint partners: drop u,v,w
    ReplaceByOuter,       // (iii) w nested in v, u the only one on v: u := v
    DropFourYRedexes,     // (iv)  m also overlaps v: drop u,m,v,w
};

struct OrthoTraceEntry {
    OrthoCase kind;
    Redex u, v;
    std::optional<Redex> w, m;
    int conflict_depth = 0;  // min depth of any cross-conflict when selected
    std::string describe() const;
};

struct OrthoResult {
    Development u_dev;
    Development v_dev;
    bool budget_exhausted = false;
    /// Min depth of a remaining cross-conflict, when budget was exhausted.
    std::optional<int> frontier_depth;
    std::vector<OrthoTraceEntry> trace;
};

/// Top-down orthogonalization of two co-initial developments: while a
/// conflict between non-identical overlapping redexes exists above depth d,
/// resolve the topmost one by the four-case analysis. Conflicts at depth >= d
/// are left as a reported frontier ("pushed down to infinity"). Develop
/// targets are preserved to depth d and verified.
///
/// Periodic inputs are materialized to depth d + 2 * max pattern depth; the
/// returned developments are that finite approximation, conflict-free below
/// d, with any visible deeper conflict reported as the frontier.
OrthoResult orthogonalize_developments(const TRS& trs, const Development& u_dev,
                                       const Development& v_dev, int d);

}  // namespace wo
