#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wo/trs.hpp"

namespace wo {

/// A rule occurrence in (the tree unfolding of) a term.
struct Redex {
    Position pos;
    std::string rule;

    bool operator==(const Redex& other) const { return pos == other.pos && rule == other.rule; }
    bool operator<(const Redex& other) const {
        if (!(pos == other.pos)) return pos < other.pos;
        return rule < other.rule;
    }
    std::string to_string() const { return pos.to_string() + ":" + rule; }
};

/// Marks every unfolding occurrence of an equation-system node as contracted
/// by a rule; the denoted redex set is computable to any depth. Since all
/// occurrences of a node share the same subgraph, one match certifies all.
struct PeriodicMark {
    Term::NodeId node = 0;
    std::string rule;

    bool operator==(const PeriodicMark& o) const { return node == o.node && rule == o.rule; }
    bool operator<(const PeriodicMark& o) const {
        return node != o.node ? node < o.node : rule < o.rule;
    }
};

/// A finite set of explicit redexes plus periodic node markings.
struct RedexSet {
    std::vector<Redex> explicit_redexes;
    std::vector<PeriodicMark> marks;

    static RedexSet of(std::vector<Redex> rs);
    bool periodic() const { return !marks.empty(); }
    bool empty() const { return explicit_redexes.empty() && marks.empty(); }
    void normalize();
};

/// Occurrences denoted by a redex set, materialized for roots at depth < d,
/// in (depth, lex) order. Explicit redexes are included regardless of d.
std::vector<Redex> denote(const TRS& trs, const Term& t, const RedexSet& set, int d);

/// Positions covered by the redex's lhs pattern, translated into the term.
std::vector<Position> pattern_positions_at(const TRS& trs, const Redex& r);

bool is_redex(const TRS& trs, const Term& t, const Redex& r);

/// All redexes rooted at depth < d, by exhaustive matching, (depth, lex)
/// sorted. Complete for the unfolding truncated at d + max pattern depth.
std::vector<Redex> find_redexes(const TRS& trs, const Term& t, int d);

/// Patterns of the two redexes intersect in the term. Symmetric, and a redex
/// overlaps itself.
bool overlap(const TRS& trs, const Redex& a, const Redex& b);

/// Partition into equivalence classes of the transitive closure of overlap.
std::vector<std::vector<size_t>> overlap_clusters(const TRS& trs,
                                                  const std::vector<Redex>& redexes);

struct YReport {
    /// Indices (into the input) of redexes whose cluster contains two members
    /// at disjoint positions; the whole cluster is droppable.
    std::vector<size_t> y_indices;
    struct Cluster {
        std::vector<size_t> members;
        bool is_y_cluster = false;
    };
    std::vector<Cluster> clusters;
};

YReport y_redexes(const TRS& trs, const std::vector<Redex>& redexes);

struct RewriteStep {
    Term source;
    Redex redex;
    Term target;
};

/// Contract a single redex: C[l sigma] -> C[r sigma]. Rational input yields
/// rational output.
Term apply_redex(const TRS& trs, const Term& t, const Redex& r);
RewriteStep make_step(const TRS& trs, const Term& t, const Redex& r);

/// Simultaneous contraction of pairwise disjoint redexes.
struct ParallelStep {
    Term source;
    RedexSet redexes;

    /// Validates pairwise disjointness of the denoted set (exactly, via the
    /// node graph for periodic marks).
    static ParallelStep make(const TRS& trs, Term source, RedexSet redexes);
    static ParallelStep make(const TRS& trs, Term source, std::vector<Redex> redexes);
    bool empty() const { return redexes.empty(); }
};

/// A set of pairwise non-overlapping redexes; nesting is allowed.
struct Development {
    Term source;
    RedexSet redexes;

    static Development make(const TRS& trs, Term source, RedexSet redexes);
    static Development make(const TRS& trs, Term source, std::vector<Redex> redexes);
    bool empty() const { return redexes.empty(); }
};

/// Innermost-first execution order: deepest position first, left-most among
/// equal depths.
std::vector<Redex> innermost_order(std::vector<Redex> redexes);

/// The innermost step sequence of a complete development of an explicit
/// redex set. Positions of pending redexes are unaffected because deeper
/// redexes are contracted first; the result is exact on rational terms.
std::vector<RewriteStep> develop_steps(const TRS& trs, const Term& t,
                                       const std::vector<Redex>& redexes);

/// Result of the complete development. Exact for explicit sets; for periodic
/// sets computed on a depth-(d + pattern slack) truncation and re-truncated,
/// hence correct to depth d whenever the development is strongly convergent.
Term develop(const TRS& trs, const Term& t, const RedexSet& set, int d);
Term develop(const TRS& trs, const Development& dev, int d);
Term target(const TRS& trs, const ParallelStep& step);

/// Residual occurrences of a tracked position after one step: positions in
/// the step's pattern are rejected (callers must pre-filter overlaps),
/// positions under a variable are relayed to that variable's occurrences in
/// the rhs, everything else passes through unchanged.
std::vector<Position> trace_position(const TRS& trs, const RewriteStep& step, const Position& q);

/// Parse the redex-set literal: `{eps:SP, 1.1:SP}` for explicit sets and
/// `{node X : AAA}` entries for periodic marks (X names a rec binder of t).
RedexSet parse_redex_set(std::string_view text, const TRS& trs, const Term& t);

std::string to_string(const RedexSet& set, const Term& t);

}  // namespace wo
