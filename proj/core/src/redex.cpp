#include "wo/redex.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace wo {

// ---------------------------------------------------------------------------
// RedexSet
// ---------------------------------------------------------------------------

RedexSet RedexSet::of(std::vector<Redex> rs) {
    RedexSet s;
    s.explicit_redexes = std::move(rs);
    s.normalize();
    return s;
}

void RedexSet::normalize() {
    std::sort(explicit_redexes.begin(), explicit_redexes.end());
    explicit_redexes.erase(std::unique(explicit_redexes.begin(), explicit_redexes.end()),
                           explicit_redexes.end());
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
}

namespace {

constexpr long kDenoteNodeLimit = 4L * 1000 * 1000;

void check_mark_is_redex(const TRS& trs, const Term& t, const PeriodicMark& m) {
    const Rule& rule = trs.rule(m.rule);
    Term at = t.rooted_at(m.node);
    if (!match_at(rule.lhs, at, Position{}))
        throw input_error("periodic mark: rule " + m.rule + " does not match the marked node");
}

}  // namespace

std::vector<Redex> denote(const TRS& trs, const Term& t, const RedexSet& set, int d) {
    std::vector<Redex> out = set.explicit_redexes;
    if (!set.marks.empty()) {
        for (const PeriodicMark& m : set.marks) check_mark_is_redex(trs, t, m);
        std::set<Term::NodeId> marked;
        for (const PeriodicMark& m : set.marks) marked.insert(m.node);
        long budget = kDenoteNodeLimit;
        std::function<void(Term::NodeId, Position)> walk = [&](Term::NodeId id, Position p) {
            if (--budget < 0) throw budget_error("denote: unfolding exceeds node limit");
            if (marked.count(id))
                for (const PeriodicMark& m : set.marks)
                    if (m.node == id) out.push_back(Redex{p, m.rule});
            if (p.depth() + 1 >= d) return;
            const auto& n = t.node(id);
            for (size_t i = 0; i < n.children.size(); ++i)
                walk(n.children[i], p.append(static_cast<int>(i + 1)));
        };
        if (d > 0) walk(t.root(), Position{});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Redex discovery and contraction
// ---------------------------------------------------------------------------

std::vector<Position> pattern_positions_at(const TRS& trs, const Redex& r) {
    const Rule& rule = trs.rule(r.rule);
    std::vector<Position> out;
    out.reserve(rule.pattern_positions.size());
    for (const Position& q : rule.pattern_positions) out.push_back(r.pos.concat(q));
    return out;
}

bool is_redex(const TRS& trs, const Term& t, const Redex& r) {
    const Rule* rule = trs.find_rule(r.rule);
    if (!rule) return false;
    auto id = node_at(t, r.pos);
    if (!id) return false;
    return match_at(rule->lhs, t, r.pos).has_value();
}

std::vector<Redex> find_redexes(const TRS& trs, const Term& t, int d) {
    std::vector<Redex> out;
    for (const Position& p : positions_to_depth(t, d))
        for (const Rule& rule : trs.rules)
            if (match_at(rule.lhs, t, p)) out.push_back(Redex{p, rule.name});
    return out;  // positions_to_depth is (depth, lex) sorted already
}

Term apply_redex(const TRS& trs, const Term& t, const Redex& r) {
    const Rule& rule = trs.rule(r.rule);
    auto subst = match_at(rule.lhs, t, r.pos);
    if (!subst) throw input_error("apply_redex: rule " + r.rule + " does not match at " +
                                  r.pos.to_string());
    return replace_at(t, r.pos, apply_substitution(rule.rhs, *subst));
}

RewriteStep make_step(const TRS& trs, const Term& t, const Redex& r) {
    Term target = apply_redex(trs, t, r);  // evaluated first: it may throw
    return RewriteStep{t, r, std::move(target)};
}

// ---------------------------------------------------------------------------
// Overlap relation
// ---------------------------------------------------------------------------

bool overlap(const TRS& trs, const Redex& a, const Redex& b) {
    // Patterns live inside the subtrees below their roots, so incomparable
    // positions can never overlap.
    if (a.pos.disjoint_from(b.pos)) return false;
    auto pa = pattern_positions_at(trs, a);
    auto pb = pattern_positions_at(trs, b);
    for (const Position& p : pa)
        for (const Position& q : pb)
            if (p == q) return true;
    return false;
}

std::vector<std::vector<size_t>> overlap_clusters(const TRS& trs,
                                                  const std::vector<Redex>& redexes) {
    std::vector<size_t> parent(redexes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < redexes.size(); ++i)
        for (size_t j = i + 1; j < redexes.size(); ++j)
            if (overlap(trs, redexes[i], redexes[j])) parent[find(i)] = find(j);
    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < redexes.size(); ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<size_t>> out;
    for (auto& [_, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

YReport y_redexes(const TRS& trs, const std::vector<Redex>& redexes) {
    YReport report;
    for (auto& members : overlap_clusters(trs, redexes)) {
        YReport::Cluster cluster;
        cluster.members = members;
        for (size_t i = 0; !cluster.is_y_cluster && i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j)
                if (redexes[members[i]].pos.disjoint_from(redexes[members[j]].pos)) {
                    cluster.is_y_cluster = true;
                    break;
                }
        if (cluster.is_y_cluster)
            report.y_indices.insert(report.y_indices.end(), members.begin(), members.end());
        report.clusters.push_back(std::move(cluster));
    }
    std::sort(report.y_indices.begin(), report.y_indices.end());
    return report;
}

// ---------------------------------------------------------------------------
// Parallel steps and developments
// ---------------------------------------------------------------------------

namespace {

// Non-empty graph path from `from` to any node in `targets`?
bool reaches_marked(const Term& t, Term::NodeId from, const std::set<Term::NodeId>& targets) {
    std::vector<bool> seen(t.node_count(), false);
    std::queue<Term::NodeId> q;
    for (Term::NodeId c : t.node(from).children) q.push(c);
    while (!q.empty()) {
        Term::NodeId id = q.front();
        q.pop();
        if (seen[static_cast<size_t>(id)]) continue;
        seen[static_cast<size_t>(id)] = true;
        if (targets.count(id)) return true;
        for (Term::NodeId c : t.node(id).children) q.push(c);
    }
    return false;
}

void validate_explicit_redexes(const TRS& trs, const Term& t, const std::vector<Redex>& rs,
                               const char* what) {
    for (const Redex& r : rs)
        if (!is_redex(trs, t, r))
            throw input_error(std::string(what) + ": " + r.to_string() + " is not a redex of " +
                              to_string(t));
}

// Bound below which all explicit-vs-periodic interactions are visible.
int interaction_depth(const TRS& trs, const std::vector<Redex>& explicit_rs) {
    int d = 1;
    for (const Redex& r : explicit_rs) d = std::max(d, r.pos.depth() + 1);
    return d + trs.max_pattern_depth() + 1;
}

}  // namespace

ParallelStep ParallelStep::make(const TRS& trs, Term source, RedexSet set) {
    set.normalize();
    validate_explicit_redexes(trs, source, set.explicit_redexes, "parallel step");
    for (const PeriodicMark& m : set.marks) check_mark_is_redex(trs, source, m);

    // Explicit pairs: no prefix relation; same position means two rules.
    const auto& ex = set.explicit_redexes;
    for (size_t i = 0; i < ex.size(); ++i)
        for (size_t j = i + 1; j < ex.size(); ++j)
            if (!ex[i].pos.disjoint_from(ex[j].pos))
                throw input_error("parallel step: redexes " + ex[i].to_string() + " and " +
                                  ex[j].to_string() + " are not disjoint");

    if (!set.marks.empty()) {
        // A non-empty path between marked nodes yields nested occurrences,
        // and a marked node on a cycle nests below itself.
        std::set<Term::NodeId> marked;
        for (const PeriodicMark& m : set.marks) marked.insert(m.node);
        if (set.marks.size() != marked.size())
            throw input_error("parallel step: two marks on one node are never disjoint");
        for (Term::NodeId n : marked)
            if (reaches_marked(source, n, marked))
                throw input_error("parallel step: periodic marks denote nested occurrences");
        // Explicit vs periodic: marked node on the path to or below a redex.
        for (const Redex& r : ex) {
            Term::NodeId id = source.root();
            for (size_t k = 0; k <= r.pos.path.size(); ++k) {
                bool at_end = k == r.pos.path.size();
                if (marked.count(id) && !at_end)
                    throw input_error("parallel step: mark occurrence above explicit redex " +
                                      r.to_string());
                if (at_end) {
                    bool same_redex_only = true;
                    for (const PeriodicMark& m : set.marks)
                        if (m.node == id && m.rule != r.rule) same_redex_only = false;
                    if (marked.count(id) && !same_redex_only)
                        throw input_error("parallel step: mark and explicit redex collide at " +
                                          r.pos.to_string());
                    if (reaches_marked(source, id, marked))
                        throw input_error("parallel step: mark occurrence below explicit redex " +
                                          r.to_string());
                    break;
                }
                id = source.node(id).children[static_cast<size_t>(r.pos.path[k] - 1)];
            }
        }
    }
    return ParallelStep{std::move(source), std::move(set)};
}

ParallelStep ParallelStep::make(const TRS& trs, Term source, std::vector<Redex> redexes) {
    return make(trs, std::move(source), RedexSet::of(std::move(redexes)));
}

Development Development::make(const TRS& trs, Term source, RedexSet set) {
    set.normalize();
    validate_explicit_redexes(trs, source, set.explicit_redexes, "development");
    for (const PeriodicMark& m : set.marks) check_mark_is_redex(trs, source, m);

    const auto& ex = set.explicit_redexes;
    for (size_t i = 0; i < ex.size(); ++i)
        for (size_t j = i + 1; j < ex.size(); ++j)
            if (overlap(trs, ex[i], ex[j]))
                throw input_error("development: redexes " + ex[i].to_string() + " and " +
                                  ex[j].to_string() + " overlap");

    if (!set.marks.empty()) {
        // Pattern of one marked occurrence may not cover another marked
        // occurrence: walking a non-root pattern position from a marked node
        // must not land on a marked node.
        std::set<Term::NodeId> marked;
        for (const PeriodicMark& m : set.marks) marked.insert(m.node);
        if (set.marks.size() != marked.size())
            throw input_error("development: two marks on one node overlap at the root");
        for (const PeriodicMark& m : set.marks) {
            const Rule& rule = trs.rule(m.rule);
            for (const Position& q : rule.pattern_positions) {
                if (q.is_root()) continue;
                Term::NodeId id = m.node;
                bool ok = true;
                for (int ix : q.path) {
                    const auto& n = source.node(id);
                    if (ix < 1 || static_cast<size_t>(ix) > n.children.size()) {
                        ok = false;
                        break;
                    }
                    id = n.children[static_cast<size_t>(ix - 1)];
                }
                if (ok && marked.count(id))
                    throw input_error("development: periodic marks overlap along the cycle");
            }
        }
        // Explicit vs periodic pairs, all visible below a finite depth.
        auto periodic_part = RedexSet{{}, set.marks};
        auto occurrences = denote(trs, source, periodic_part, interaction_depth(trs, ex));
        for (const Redex& r : ex)
            for (const Redex& o : occurrences)
                if (!(r == o) && overlap(trs, r, o))
                    throw input_error("development: explicit redex " + r.to_string() +
                                      " overlaps a periodic occurrence at " + o.pos.to_string());
    }
    return Development{std::move(source), std::move(set)};
}

Development Development::make(const TRS& trs, Term source, std::vector<Redex> redexes) {
    return make(trs, std::move(source), RedexSet::of(std::move(redexes)));
}

std::vector<Redex> innermost_order(std::vector<Redex> redexes) {
    std::sort(redexes.begin(), redexes.end(), [](const Redex& a, const Redex& b) {
        if (a.pos.depth() != b.pos.depth()) return a.pos.depth() > b.pos.depth();
        if (!(a.pos == b.pos)) return a.pos < b.pos;
        return a.rule < b.rule;
    });
    return redexes;
}

std::vector<RewriteStep> develop_steps(const TRS& trs, const Term& t,
                                       const std::vector<Redex>& redexes) {
    std::vector<RewriteStep> steps;
    Term cur = t;
    for (const Redex& r : innermost_order(redexes)) {
        steps.push_back(make_step(trs, cur, r));
        cur = steps.back().target;
    }
    return steps;
}

Term develop(const TRS& trs, const Term& t, const RedexSet& set, int d) {
    // Reject sets with pairwise overlaps; nesting is fine.
    Development::make(trs, t, set);
    if (set.marks.empty()) {
        auto steps = develop_steps(trs, t, set.explicit_redexes);
        return steps.empty() ? t : steps.back().target;
    }
    int p = trs.max_pattern_depth();
    int big = (d + 1) * (p + 1) + p;
    Term truncated = unfold(t, big);
    auto all = denote(trs, t, set, big - p);
    std::vector<Redex> usable;
    for (const Redex& r : all)
        if (r.pos.depth() <= big - p) usable.push_back(r);
    auto steps = develop_steps(trs, truncated, usable);
    Term result = steps.empty() ? truncated : steps.back().target;
    return unfold(result, d);
}

Term develop(const TRS& trs, const Development& dev, int d) {
    return develop(trs, dev.source, dev.redexes, d);  // construction re-validated
}

Term target(const TRS& trs, const ParallelStep& step) {
    if (step.redexes.periodic())
        throw input_error("target: periodic parallel steps need a depth budget; use develop");
    auto steps = develop_steps(trs, step.source, step.redexes.explicit_redexes);
    return steps.empty() ? step.source : steps.back().target;
}

// ---------------------------------------------------------------------------
// Residual tracing
// ---------------------------------------------------------------------------

namespace {

// Positions of variable `x` in the unfolding of `rhs`. Requires that no
// variable occurrence sits under a cycle (infinitely many residuals).
std::vector<Position> rhs_var_occurrences(const Term& rhs, const std::string& x) {
    std::vector<Position> out;
    std::vector<bool> on_path(rhs.node_count(), false);
    std::function<void(Term::NodeId, Position)> walk = [&](Term::NodeId id, Position p) {
        if (on_path[static_cast<size_t>(id)])
            throw input_error(
                "residual tracing over a rule whose rhs repeats under a rec binder is not "
                "supported");
        const auto& n = rhs.node(id);
        if (n.is_var) {
            if (n.label == x) out.push_back(p);
            return;
        }
        on_path[static_cast<size_t>(id)] = true;
        for (size_t i = 0; i < n.children.size(); ++i)
            walk(n.children[i], p.append(static_cast<int>(i + 1)));
        on_path[static_cast<size_t>(id)] = false;
    };
    walk(rhs.root(), Position{});
    return out;
}

}  // namespace

std::vector<Position> trace_position(const TRS& trs, const RewriteStep& step, const Position& q) {
    const Position& p = step.redex.pos;
    if (!p.is_prefix_of(q)) return {q};  // above or in a disjoint subtree
    const Rule& rule = trs.rule(step.redex.rule);
    Position w = q.suffix_after(p);
    // Find the lhs variable position the suffix passes through.
    for (const auto& [var, vpos] : rule.lhs_var_positions) {
        if (!vpos.is_prefix_of(w)) continue;
        Position rest = w.suffix_after(vpos);
        std::vector<Position> out;
        for (const Position& occ : rhs_var_occurrences(rule.rhs, var))
            out.push_back(p.concat(occ).concat(rest));
        return out;
    }
    throw input_error("trace_position: position " + q.to_string() +
                      " lies inside the contracted pattern at " + p.to_string());
}

// ---------------------------------------------------------------------------
// Literals
// ---------------------------------------------------------------------------

RedexSet parse_redex_set(std::string_view text, const TRS& trs, const Term& t) {
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return std::string();
        size_t e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    };
    std::string body{text};
    body = trim(body);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}')
        throw input_error("redex set literal must be enclosed in { }");
    body = body.substr(1, body.size() - 2);
    RedexSet set;
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item.rfind("node ", 0) == 0) {
            std::string rest = trim(item.substr(5));
            size_t colon = rest.find(':');
            if (colon == std::string::npos)
                throw input_error("expected `node <name> : <rule>` in " + item);
            std::string name = trim(rest.substr(0, colon));
            std::string rule = trim(rest.substr(colon + 1));
            auto id = t.node_by_name(name);
            if (!id) throw input_error("no rec binder named " + name + " in the term");
            trs.rule(rule);  // existence check
            set.marks.push_back(PeriodicMark{*id, rule});
        } else {
            size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw input_error("expected `<position>:<rule>` in " + item);
            Redex r;
            r.pos = Position::parse(item.substr(0, colon));
            r.rule = trim(item.substr(colon + 1));
            trs.rule(r.rule);
            set.explicit_redexes.push_back(r);
        }
    }
    set.normalize();
    return set;
}

std::string to_string(const RedexSet& set, const Term& t) {
    std::string out = "{";
    bool first = true;
    for (const Redex& r : set.explicit_redexes) {
        if (!first) out += ", ";
        first = false;
        out += r.to_string();
    }
    for (const PeriodicMark& m : set.marks) {
        if (!first) out += ", ";
        first = false;
        const std::string& name = t.node(m.node).rec_name;
        out += "node " + (name.empty() ? "#" + std::to_string(m.node) : name) + " : " + m.rule;
    }
    return out + "}";
}

}  // namespace wo
