#include "wo/trs.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace wo {

// ---------------------------------------------------------------------------
// Rule
// ---------------------------------------------------------------------------

Rule::Rule(std::string name_, Term lhs_, Term rhs_)
    : name(std::move(name_)), lhs(std::move(lhs_)), rhs(std::move(rhs_)) {
    if (!is_finite(lhs)) throw input_error("rule " + name + ": lhs must be finite");
    if (lhs.root_is_var()) throw input_error("rule " + name + ": lhs is a variable");
    if (contains_cut(lhs) || contains_cut(rhs))
        throw input_error("rule " + name + ": the cut marker cannot occur in rules");
    auto lvars = variables(lhs);
    for (const std::string& v : variables(rhs))
        if (std::find(lvars.begin(), lvars.end(), v) == lvars.end())
            throw input_error("rule " + name + ": rhs variable " + v + " not bound by lhs");
    left_linear = is_linear(lhs);
    collapsing = rhs.root_is_var();

    std::function<void(Term::NodeId, Position)> walk = [&](Term::NodeId id, Position p) {
        const auto& n = lhs.node(id);
        if (n.is_var) {
            lhs_var_positions.emplace_back(n.label, p);
            return;
        }
        pattern_positions.push_back(p);
        for (size_t i = 0; i < n.children.size(); ++i)
            walk(n.children[i], p.append(static_cast<int>(i + 1)));
    };
    walk(lhs.root(), Position{});
    std::sort(pattern_positions.begin(), pattern_positions.end());
    pattern_depth = 1 + pattern_positions.back().depth();
}

const Rule& TRS::rule(const std::string& name) const {
    const Rule* r = find_rule(name);
    if (!r) throw input_error("unknown rule: " + name);
    return *r;
}

const Rule* TRS::find_rule(const std::string& name) const {
    for (const Rule& r : rules)
        if (r.name == name) return &r;
    return nullptr;
}

int TRS::rule_index(const std::string& name) const {
    for (size_t i = 0; i < rules.size(); ++i)
        if (rules[i].name == name) return static_cast<int>(i);
    throw input_error("unknown rule: " + name);
}

bool TRS::left_linear() const {
    return std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.left_linear; });
}

std::set<std::string> TRS::collapsing_rules() const {
    std::set<std::string> out;
    for (const Rule& r : rules)
        if (r.collapsing) out.insert(r.name);
    return out;
}

int TRS::max_pattern_depth() const {
    int d = 1;
    for (const Rule& r : rules) d = std::max(d, r.pattern_depth);
    return d;
}

RuleCheck check_rules(const TRS& trs) {
    RuleCheck rc;
    rc.left_linear = trs.left_linear();
    rc.collapsing_rules = trs.collapsing_rules();
    return rc;
}

// ---------------------------------------------------------------------------
// Unification of finite terms
// ---------------------------------------------------------------------------

namespace {

// Resolve a term through the substitution until its root is no longer a
// bound variable.
Term walk_root(Term t, const Substitution& subst) {
    while (t.root_is_var()) {
        auto it = subst.find(t.node(t.root()).label);
        if (it == subst.end()) break;
        t = it->second;
    }
    return t;
}

bool occurs(const std::string& var, const Term& t, const Substitution& subst) {
    const auto& n = t.node(t.root());
    if (n.is_var) {
        if (n.label == var) return true;
        auto it = subst.find(n.label);
        return it != subst.end() && occurs(var, it->second, subst);
    }
    for (Term::NodeId c : n.children)
        if (occurs(var, t.rooted_at(c), subst)) return true;
    return false;
}

bool unify_into(const Term& a, const Term& b, Substitution& subst) {
    Term x = walk_root(a, subst);
    Term y = walk_root(b, subst);
    const auto& nx = x.node(x.root());
    const auto& ny = y.node(y.root());
    if (nx.is_var && ny.is_var && nx.label == ny.label) return true;
    if (nx.is_var) {
        if (occurs(nx.label, y, subst)) return false;
        subst[nx.label] = y;
        return true;
    }
    if (ny.is_var) {
        if (occurs(ny.label, x, subst)) return false;
        subst[ny.label] = x;
        return true;
    }
    if (nx.label != ny.label || nx.children.size() != ny.children.size()) return false;
    for (size_t i = 0; i < nx.children.size(); ++i)
        if (!unify_into(x.rooted_at(nx.children[i]), y.rooted_at(ny.children[i]), subst)) return false;
    return true;
}

// Fully apply a triangular substitution to a finite term.
Term resolve(const Term& t, const Substitution& subst) {
    Term r = walk_root(t, subst);
    const auto& n = r.node(r.root());
    if (n.is_var) return r;
    std::vector<Term> args;
    for (Term::NodeId c : n.children) args.push_back(resolve(r.rooted_at(c), subst));
    return Term::fun(n.label, args);
}

Term rename_vars(const Term& t, const std::string& suffix) {
    Substitution renaming;
    for (const std::string& v : variables(t)) renaming[v] = Term::var(v + suffix);
    return apply_substitution(t, renaming);
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
    if (!is_finite(a) || !is_finite(b)) throw input_error("unify: terms must be finite");
    Substitution subst;
    if (!unify_into(a, b, subst)) return std::nullopt;
    // Flatten the triangular form.
    Substitution out;
    for (const auto& [v, t] : subst) out[v] = resolve(t, subst);
    return out;
}

// ---------------------------------------------------------------------------
// Critical pairs
// ---------------------------------------------------------------------------

std::vector<CriticalPair> critical_pairs(const TRS& trs) {
    if (!trs.left_linear())
        throw input_error("critical_pairs: the system must be left-linear");
    std::vector<CriticalPair> out;
    for (size_t i = 0; i < trs.rules.size(); ++i) {
        const Rule& outer = trs.rules[i];
        auto outer_vars = variables(outer.lhs);
        for (size_t j = 0; j < trs.rules.size(); ++j) {
            // Fresh renaming of the inner rule before unification.
            std::string suffix = "'";
            auto collides = [&] {
                for (const std::string& v : variables(trs.rules[j].lhs))
                    if (std::find(outer_vars.begin(), outer_vars.end(), v + suffix) !=
                        outer_vars.end())
                        return true;
                return false;
            };
            while (collides()) suffix += "'";
            Term inner_lhs = rename_vars(trs.rules[j].lhs, suffix);
            Term inner_rhs = rename_vars(trs.rules[j].rhs, suffix);
            for (const Position& p : outer.pattern_positions) {
                if (p.is_root() && i >= j) continue;  // root overlaps count once
                Term sub = subterm_at(outer.lhs, p);
                auto mgu = unify(sub, inner_lhs);
                if (!mgu) continue;
                CriticalPair cp;
                cp.peak = resolve(outer.lhs, *mgu);
                cp.left_reduct = apply_substitution(outer.rhs, *mgu);
                cp.right_reduct = replace_at(cp.peak, p, apply_substitution(inner_rhs, *mgu));
                cp.outer_rule = outer.name;
                cp.inner_rule = trs.rules[j].name;
                cp.pos = p;
                out.push_back(std::move(cp));
            }
        }
    }
    return out;
}

WOVerdict is_weakly_orthogonal(const TRS& trs) {
    WOVerdict v;
    v.left_linear = trs.left_linear();
    if (!v.left_linear) return v;
    for (const CriticalPair& cp : critical_pairs(trs)) {
        if (!cp.trivial()) {
            v.witness = cp;
            return v;
        }
    }
    v.weakly_orthogonal = true;
    return v;
}

bool is_orthogonal(const TRS& trs) {
    return trs.left_linear() && critical_pairs(trs).empty();
}

// ---------------------------------------------------------------------------
// .trs format
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

TRS parse_trs(std::string_view text) {
    TRS trs;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "sig") {
            std::string decl;
            while (ls >> decl) {
                size_t slash = decl.rfind('/');
                if (slash == std::string::npos)
                    throw parse_error("expected <symbol>/<arity>: " + decl, lineno, 1);
                std::string sym = decl.substr(0, slash);
                int arity;
                try {
                    arity = std::stoi(decl.substr(slash + 1));
                } catch (const std::exception&) {
                    throw parse_error("bad arity in " + decl, lineno, 1);
                }
                trs.sig.declare(sym, arity);
            }
        } else if (head == "rule") {
            std::string rest = trim(line.substr(4));
            size_t colon = rest.find(':');
            if (colon == std::string::npos)
                throw parse_error("expected `rule <name> : <lhs> -> <rhs>`", lineno, 1);
            std::string name = trim(rest.substr(0, colon));
            if (name.empty()) throw parse_error("rule needs a name", lineno, 1);
            std::string body = rest.substr(colon + 1);
            size_t arrow = body.find("->");
            if (arrow == std::string::npos)
                throw parse_error("rule " + name + " is missing `->`", lineno, 1);
            Term lhs, rhs;
            try {
                lhs = parse_term(body.substr(0, arrow), trs.sig);
                rhs = parse_term(body.substr(arrow + 2), trs.sig);
            } catch (const parse_error& e) {
                throw parse_error(std::string("in rule ") + name + ": " + e.what(), lineno, 1);
            }
            if (trs.find_rule(name))
                throw parse_error("duplicate rule name " + name, lineno, 1);
            trs.rules.emplace_back(name, lhs, rhs);
        } else {
            throw parse_error("unknown directive `" + head + "`", lineno, 1);
        }
    }
    return trs;
}

TRS parse_trs_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_trs(buf.str());
}

std::string to_string(const TRS& trs) {
    std::string out = "sig ";
    bool first = true;
    for (const auto& [sym, arity] : trs.sig.symbols()) {
        if (!first) out += ' ';
        first = false;
        out += sym + "/" + std::to_string(arity);
    }
    out += '\n';
    for (const Rule& r : trs.rules)
        out += "rule " + r.name + " : " + to_string(r.lhs) + " -> " + to_string(r.rhs) + "\n";
    return out;
}

std::string to_string(const CriticalPair& cp) {
    return "peak " + to_string(cp.peak) + " -> <" + to_string(cp.left_reduct) + ", " +
           to_string(cp.right_reduct) + "> via " + cp.outer_rule + "@ε / " + cp.inner_rule +
           "@" + cp.pos.to_string();
}

}  // namespace wo
