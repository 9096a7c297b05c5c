#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wo/term.hpp"

namespace wo {

/// A rewrite rule with a finite left-hand side and a possibly rational
/// right-hand side. Derived data is computed once at construction.
struct Rule {
    std::string name;
    Term lhs;
    Term rhs;

    bool left_linear = false;
    bool collapsing = false;  // rhs is a bare variable
    /// Non-variable positions of the lhs, (depth, lex) sorted.
    std::vector<Position> pattern_positions;
    /// 1 + max depth of a non-variable lhs position; the slack a contraction
    /// can lift nested content by.
    int pattern_depth = 1;
    /// Position of each lhs variable (unique when left-linear).
    std::vector<std::pair<std::string, Position>> lhs_var_positions;

    Rule() = default;
    Rule(std::string name, Term lhs, Term rhs);
};

struct TRS {
    Signature sig;
    std::vector<Rule> rules;

    const Rule& rule(const std::string& name) const;
    const Rule* find_rule(const std::string& name) const;
    int rule_index(const std::string& name) const;

    bool left_linear() const;
    std::set<std::string> collapsing_rules() const;
    bool collapse_free() const { return collapsing_rules().empty(); }
    int max_pattern_depth() const;
};

struct RuleCheck {
    bool left_linear = false;
    std::set<std::string> collapsing_rules;
};

/// Left-linearity and collapsingness flags for the whole system.
RuleCheck check_rules(const TRS& trs);

/// Superposition of `inner_rule` into a non-variable, non-root-equal position
/// of `outer_rule`'s lhs; the peak one-steps to both reducts.
struct CriticalPair {
    Term peak;
    Term left_reduct;   // outer rule applied at the root
    Term right_reduct;  // inner rule applied at `pos`
    std::string outer_rule;
    std::string inner_rule;
    Position pos;

    bool trivial() const { return eq_rational(left_reduct, right_reduct); }
};

/// All critical pairs, ordered by (outer rule index, inner rule index,
/// position). Root overlaps of two distinct rules are counted once, in the
/// rule-index direction; a rule never root-overlaps itself.
/// Rejects non-left-linear systems.
std::vector<CriticalPair> critical_pairs(const TRS& trs);

struct WOVerdict {
    bool weakly_orthogonal = false;
    bool left_linear = false;
    std::optional<CriticalPair> witness;  // a non-trivial pair, when present
};

WOVerdict is_weakly_orthogonal(const TRS& trs);
bool is_orthogonal(const TRS& trs);

/// Most general unifier of two finite terms, if any.
std::optional<Substitution> unify(const Term& a, const Term& b);

/// Parse the line-oriented .trs format:
///
///     sig  S/1 P/1
///     rule PS : P(S(x)) -> x
///     # comment
///
/// Right-hand sides may use `rec` binders.
TRS parse_trs(std::string_view text);
TRS parse_trs_file(const std::string& path);

std::string to_string(const TRS& trs);
std::string to_string(const CriticalPair& cp);

}  // namespace wo
