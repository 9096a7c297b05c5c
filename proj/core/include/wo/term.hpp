#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wo/errors.hpp"

namespace wo {

/// A path of 1-based child indices from the root; the empty path is the root.
struct Position {
    std::vector<int> path;

    Position() = default;
    Position(std::initializer_list<int> ix) : path(ix) {}
    explicit Position(std::vector<int> ix) : path(std::move(ix)) {}

    int depth() const { return static_cast<int>(path.size()); }
    bool is_root() const { return path.empty(); }

    bool is_prefix_of(const Position& other) const;
    bool is_strict_prefix_of(const Position& other) const;
    /// Neither position is a prefix of the other.
    bool disjoint_from(const Position& other) const;

    Position append(int child) const;
    Position concat(const Position& suffix) const;
    /// Suffix such that prefix.concat(suffix) == *this; requires prefix <= *this.
    Position suffix_after(const Position& prefix) const;

    bool operator==(const Position& other) const { return path == other.path; }
    /// (depth, lexicographic) order: topmost first, left-most among equal depth.
    bool operator<(const Position& other) const;

    std::string to_string() const;
    static Position parse(std::string_view text);
};

/// Function symbols with fixed arities. Variable names live outside of it.
class Signature {
  public:
    Signature() = default;

    void declare(const std::string& name, int arity);
    bool has(const std::string& name) const { return arity_.count(name) != 0; }
    std::optional<int> arity(const std::string& name) const;
    const std::map<std::string, int>& symbols() const { return arity_; }

  private:
    std::map<std::string, int> arity_;
};

/// Pseudo-symbol of arity 0 marking pruned subterms in truncations. It can
/// never be declared in a signature and no rule pattern matches it.
inline const std::string kCutMarker = "▢";

/// A finite or rational infinite first-order term, stored as a rooted system
/// of guarded equations: each node is a function symbol with child node ids
/// or a variable leaf. Cycles through child edges denote infinite unfoldings;
/// since only function nodes have children, every cycle is guarded.
///
/// Terms are immutable after construction and cheap to copy around at the
/// sizes this library works with.
class Term {
  public:
    using NodeId = int32_t;

    struct Node {
        std::string label;             // symbol or variable name
        std::vector<NodeId> children;  // empty for variables
        bool is_var = false;
        std::string rec_name;  // binder name from `rec X = ...`, may be empty
    };

    Term() : Term(var("x")) {}

    static Term var(const std::string& name);
    static Term fun(const std::string& symbol, const std::vector<Term>& args);
    static Term constant(const std::string& symbol) { return fun(symbol, {}); }
    static Term cut() { return constant(kCutMarker); }
    /// Assemble from an explicit equation system; ids are validated and the
    /// reachable part is compacted into depth-first order.
    static Term from_graph(std::vector<Node> nodes, NodeId root);

    NodeId root() const { return root_; }
    const Node& node(NodeId id) const { return nodes_.at(static_cast<size_t>(id)); }
    size_t node_count() const { return nodes_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }

    bool root_is_var() const { return node(root_).is_var; }

    /// Same equation system re-rooted at `id`.
    Term rooted_at(NodeId id) const;

    /// Node named by a `rec` binder, if any.
    std::optional<NodeId> node_by_name(const std::string& rec_name) const;

  private:
    Term(std::vector<Node> nodes, NodeId root) : nodes_(std::move(nodes)), root_(root) {}
    void normalize();

    std::vector<Node> nodes_;
    NodeId root_ = 0;
};

using Substitution = std::map<std::string, Term>;

// ---- structural queries ----

/// True iff the term graph is acyclic, i.e. the unfolding is finite.
bool is_finite(const Term& t);

/// Height of a finite term (constant has height 0). Throws on cyclic input.
int height(const Term& t);

/// Number of nodes of a finite term's tree unfolding.
long tree_size(const Term& t);

bool contains_cut(const Term& t);

/// Node reached by walking `p` from the root, or nullopt if out of range.
std::optional<Term::NodeId> node_at(const Term& t, const Position& p);

/// Subterm at `p` (shares structure). Throws position_error if `p` does not exist.
Term subterm_at(const Term& t, const Position& p);

/// All positions of the unfolding at depth < d, in (depth, lex) order.
std::vector<Position> positions_to_depth(const Term& t, int d);

/// Variable names occurring in (the reachable part of) the term.
std::vector<std::string> variables(const Term& t);

/// No variable occurs twice. Requires a finite term.
bool is_linear(const Term& t);

// ---- the depth-approximant semantics ----

/// Tree unfolding truncated at depth d: nodes at depth < d are kept, each
/// subterm rooted at depth d is replaced by the cut marker. A finite term of
/// height < d is returned unchanged.
Term unfold(const Term& t, int d);

/// unfold(t,d) == unfold(u,d) as finite trees, markers included.
bool eq_to_depth(const Term& t, const Term& u, int d);

/// Full bisimilarity of the (possibly infinite) unfoldings; decides equality
/// of rational terms via the product-graph construction.
bool eq_rational(const Term& t, const Term& u);

// ---- rewriting primitives ----

/// Match a finite pattern against the subterm of t at p. Variables bind the
/// (possibly rational) subterms of t; for linear patterns the result is
/// unique. Returns nullopt on symbol clash; throws position_error if p does
/// not exist in t.
std::optional<Substitution> match_at(const Term& pattern, const Term& t, const Position& p);

/// Replace variables of t by their bindings (unbound variables stay).
Term apply_substitution(const Term& t, const Substitution& subst);

/// Replace the single tree occurrence at p by u. The path to p is unshared
/// first, so replacement in a rational term affects exactly one occurrence.
Term replace_at(const Term& t, const Position& p, const Term& u);

// ---- text syntax ----

/// Renders `f(t1,...,tn)` applications with `rec X = ...` binders for cycles.
std::string to_string(const Term& t);

/// Parse the term expression syntax. Lowercase identifiers are symbols when
/// declared in `sig` and variables otherwise; uppercase identifiers are
/// recursion variables bound by `rec X = <expr> [in <expr>]`.
Term parse_term(std::string_view text, const Signature& sig);

std::string to_string(const Substitution& subst);

}  // namespace wo
