#include "wo/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wo {

// ---------------------------------------------------------------------------
// Position
// ---------------------------------------------------------------------------

bool Position::is_prefix_of(const Position& other) const {
    if (path.size() > other.path.size()) return false;
    return std::equal(path.begin(), path.end(), other.path.begin());
}

bool Position::is_strict_prefix_of(const Position& other) const {
    return path.size() < other.path.size() && is_prefix_of(other);
}

bool Position::disjoint_from(const Position& other) const {
    return !is_prefix_of(other) && !other.is_prefix_of(*this);
}

Position Position::append(int child) const {
    Position r = *this;
    r.path.push_back(child);
    return r;
}

Position Position::concat(const Position& suffix) const {
    Position r = *this;
    r.path.insert(r.path.end(), suffix.path.begin(), suffix.path.end());
    return r;
}

Position Position::suffix_after(const Position& prefix) const {
    if (!prefix.is_prefix_of(*this))
        throw position_error("suffix_after: not a prefix");
    Position r;
    r.path.assign(path.begin() + static_cast<long>(prefix.path.size()), path.end());
    return r;
}

bool Position::operator<(const Position& other) const {
    if (path.size() != other.path.size()) return path.size() < other.path.size();
    return path < other.path;
}

std::string Position::to_string() const {
    if (path.empty()) return "ε";  // ε
    std::string s;
    for (size_t i = 0; i < path.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(path[i]);
    }
    return s;
}

Position Position::parse(std::string_view text) {
    Position p;
    size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = text.size();
    while (j > i && std::isspace(static_cast<unsigned char>(text[j - 1]))) --j;
    text = text.substr(i, j - i);
    if (text.empty() || text == "ε" || text == "e" || text == "eps") return p;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find('.', pos);
        if (next == std::string_view::npos) next = text.size();
        std::string part(text.substr(pos, next - pos));
        try {
            int ix = std::stoi(part);
            if (ix < 1) throw input_error("position indices are 1-based: " + part);
            p.path.push_back(ix);
        } catch (const std::invalid_argument&) {
            throw input_error("bad position component: '" + part + "'");
        }
        pos = next + 1;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

void Signature::declare(const std::string& name, int arity) {
    if (name == kCutMarker) throw input_error("the cut marker cannot be declared as a symbol");
    if (arity < 0) throw input_error("negative arity for symbol " + name);
    auto it = arity_.find(name);
    if (it != arity_.end() && it->second != arity)
        throw input_error("symbol " + name + " redeclared with different arity");
    arity_[name] = arity;
}

std::optional<int> Signature::arity(const std::string& name) const {
    auto it = arity_.find(name);
    if (it == arity_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Term construction
// ---------------------------------------------------------------------------

Term Term::var(const std::string& name) {
    Node n;
    n.label = name;
    n.is_var = true;
    return Term({n}, 0);
}

Term Term::fun(const std::string& symbol, const std::vector<Term>& args) {
    std::vector<Node> nodes;
    Node top;
    top.label = symbol;
    nodes.push_back(top);
    for (const Term& a : args) {
        NodeId offset = static_cast<NodeId>(nodes.size());
        nodes[0].children.push_back(offset + a.root());
        for (const Node& n : a.nodes()) {
            Node copy = n;
            for (NodeId& c : copy.children) c += offset;
            nodes.push_back(std::move(copy));
        }
    }
    Term t(std::move(nodes), 0);
    t.normalize();
    return t;
}

Term Term::from_graph(std::vector<Node> nodes, NodeId root) {
    if (root < 0 || static_cast<size_t>(root) >= nodes.size())
        throw input_error("from_graph: root id out of range");
    for (const Node& n : nodes) {
        if (n.is_var && !n.children.empty())
            throw input_error("from_graph: variable node with children");
        for (NodeId c : n.children)
            if (c < 0 || static_cast<size_t>(c) >= nodes.size())
                throw input_error("from_graph: child id out of range");
    }
    Term t(std::move(nodes), root);
    t.normalize();
    return t;
}

Term Term::rooted_at(NodeId id) const {
    if (id < 0 || static_cast<size_t>(id) >= nodes_.size())
        throw input_error("rooted_at: node id out of range");
    Term t(nodes_, id);
    t.normalize();
    return t;
}

std::optional<Term::NodeId> Term::node_by_name(const std::string& rec_name) const {
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].rec_name == rec_name) return static_cast<NodeId>(i);
    return std::nullopt;
}

// Compact to the part reachable from the root, renumbering nodes in
// depth-first discovery order so that equal constructions yield equal arrays.
void Term::normalize() {
    std::vector<NodeId> remap(nodes_.size(), -1);
    std::vector<Node> out;
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (remap[static_cast<size_t>(id)] != -1) continue;
        remap[static_cast<size_t>(id)] = static_cast<NodeId>(out.size());
        out.push_back(nodes_[static_cast<size_t>(id)]);
        const Node& n = nodes_[static_cast<size_t>(id)];
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
            if (remap[static_cast<size_t>(*it)] == -1) stack.push_back(*it);
    }
    for (Node& n : out)
        for (NodeId& c : n.children) c = remap[static_cast<size_t>(c)];
    root_ = remap[static_cast<size_t>(root_)];
    nodes_ = std::move(out);
}

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

bool is_finite(const Term& t) {
    // Three-color DFS for a cycle through child edges.
    enum { White, Gray, Black };
    std::vector<int> color(t.node_count(), White);
    std::function<bool(Term::NodeId)> acyclic = [&](Term::NodeId id) {
        color[static_cast<size_t>(id)] = Gray;
        for (Term::NodeId c : t.node(id).children) {
            int& col = color[static_cast<size_t>(c)];
            if (col == Gray) return false;
            if (col == White && !acyclic(c)) return false;
        }
        color[static_cast<size_t>(id)] = Black;
        return true;
    };
    return acyclic(t.root());
}

int height(const Term& t) {
    if (!is_finite(t)) throw input_error("height: term is infinite");
    std::function<int(Term::NodeId)> h = [&](Term::NodeId id) {
        int best = 0;
        for (Term::NodeId c : t.node(id).children) best = std::max(best, 1 + h(c));
        return best;
    };
    return h(t.root());
}

long tree_size(const Term& t) {
    if (!is_finite(t)) throw input_error("tree_size: term is infinite");
    std::function<long(Term::NodeId)> sz = [&](Term::NodeId id) {
        long total = 1;
        for (Term::NodeId c : t.node(id).children) total += sz(c);
        return total;
    };
    return sz(t.root());
}

bool contains_cut(const Term& t) {
    for (const auto& n : t.nodes())
        if (!n.is_var && n.label == kCutMarker) return true;
    return false;
}

std::optional<Term::NodeId> node_at(const Term& t, const Position& p) {
    Term::NodeId id = t.root();
    for (int ix : p.path) {
        const auto& n = t.node(id);
        if (ix < 1 || static_cast<size_t>(ix) > n.children.size()) return std::nullopt;
        id = n.children[static_cast<size_t>(ix - 1)];
    }
    return id;
}

Term subterm_at(const Term& t, const Position& p) {
    auto id = node_at(t, p);
    if (!id) throw position_error("position " + p.to_string() + " out of range");
    return t.rooted_at(*id);
}

std::vector<Position> positions_to_depth(const Term& t, int d) {
    std::vector<Position> out;
    std::function<void(Term::NodeId, Position)> walk = [&](Term::NodeId id, Position p) {
        out.push_back(p);
        if (p.depth() + 1 >= d) return;  // children would be at depth >= d
        const auto& n = t.node(id);
        for (size_t i = 0; i < n.children.size(); ++i)
            walk(n.children[i], p.append(static_cast<int>(i + 1)));
    };
    if (d > 0) walk(t.root(), Position{});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> variables(const Term& t) {
    std::vector<std::string> vs;
    for (const auto& n : t.nodes())
        if (n.is_var && std::find(vs.begin(), vs.end(), n.label) == vs.end())
            vs.push_back(n.label);
    return vs;
}

bool is_linear(const Term& t) {
    if (!is_finite(t)) throw input_error("is_linear: term is infinite");
    std::unordered_map<std::string, int> count;
    std::function<void(Term::NodeId)> walk = [&](Term::NodeId id) {
        const auto& n = t.node(id);
        if (n.is_var) ++count[n.label];
        for (Term::NodeId c : n.children) walk(c);
    };
    walk(t.root());
    for (const auto& [_, c] : count)
        if (c > 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Approximants
// ---------------------------------------------------------------------------

namespace {
constexpr long kUnfoldNodeLimit = 8L * 1000 * 1000;
}

Term unfold(const Term& t, int d) {
    if (d < 0) throw input_error("unfold: negative depth");
    std::vector<Term::Node> out;
    long budget = kUnfoldNodeLimit;
    std::function<Term::NodeId(Term::NodeId, int)> build = [&](Term::NodeId id,
                                                               int depth) -> Term::NodeId {
        if (--budget < 0) throw budget_error("unfold: truncation exceeds node limit");
        const auto& n = t.node(id);
        Term::NodeId me = static_cast<Term::NodeId>(out.size());
        if (depth == d && !n.children.empty()) {
            // Subterm with content beyond the cut depth is pruned; leaves at
            // the boundary are kept as they are.
            Term::Node cut;
            cut.label = kCutMarker;
            out.push_back(cut);
            return me;
        }
        Term::Node copy;
        copy.label = n.label;
        copy.is_var = n.is_var;
        out.push_back(copy);
        for (size_t i = 0; i < n.children.size(); ++i) {
            Term::NodeId c = build(n.children[i], depth + 1);
            out[static_cast<size_t>(me)].children.push_back(c);
        }
        return me;
    };
    Term::NodeId root = build(t.root(), 0);
    return Term::from_graph(std::move(out), root);
}

namespace {

struct PairDepthHash {
    size_t operator()(const std::tuple<int32_t, int32_t, int>& k) const {
        auto [a, b, d] = k;
        size_t h = std::hash<int64_t>()((static_cast<int64_t>(a) << 32) ^ static_cast<uint32_t>(b));
        return h ^ (std::hash<int>()(d) * 0x9e3779b97f4a7c15ULL);
    }
};

}  // namespace

bool eq_to_depth(const Term& t, const Term& u, int d) {
    if (d < 0) throw input_error("eq_to_depth: negative depth");
    std::unordered_map<std::tuple<int32_t, int32_t, int>, bool, PairDepthHash> memo;
    std::function<bool(Term::NodeId, Term::NodeId, int)> eq = [&](Term::NodeId a, Term::NodeId b,
                                                                  int k) -> bool {
        const auto& na = t.node(a);
        const auto& nb = u.node(b);
        if (k == 0) {
            // At the cut depth non-leaf subterms become markers, and a
            // literal marker already is one; leaves stay and must agree.
            auto marker = [](const Term::Node& n) {
                return !n.children.empty() || (!n.is_var && n.label == kCutMarker);
            };
            if (marker(na) || marker(nb)) return marker(na) && marker(nb);
            return na.is_var == nb.is_var && na.label == nb.label;
        }
        auto key = std::make_tuple(a, b, k);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool r = na.is_var == nb.is_var && na.label == nb.label &&
                 na.children.size() == nb.children.size();
        if (r)
            for (size_t i = 0; r && i < na.children.size(); ++i)
                r = eq(na.children[i], nb.children[i], k - 1);
        memo[key] = r;
        return r;
    };
    return eq(t.root(), u.root(), d);
}

bool eq_rational(const Term& t, const Term& u) {
    std::unordered_set<int64_t> seen;
    std::function<bool(Term::NodeId, Term::NodeId)> eq = [&](Term::NodeId a,
                                                             Term::NodeId b) -> bool {
        int64_t key = (static_cast<int64_t>(a) << 32) ^ static_cast<uint32_t>(b);
        if (!seen.insert(key).second) return true;  // coinductive hypothesis
        const auto& na = t.node(a);
        const auto& nb = u.node(b);
        if (na.is_var != nb.is_var || na.label != nb.label ||
            na.children.size() != nb.children.size())
            return false;
        for (size_t i = 0; i < na.children.size(); ++i)
            if (!eq(na.children[i], nb.children[i])) return false;
        return true;
    };
    return eq(t.root(), u.root());
}

// ---------------------------------------------------------------------------
// Matching, substitution, replacement
// ---------------------------------------------------------------------------

std::optional<Substitution> match_at(const Term& pattern, const Term& t, const Position& p) {
    if (!is_finite(pattern)) throw input_error("match_at: pattern must be finite");
    auto start = node_at(t, p);
    if (!start) throw position_error("match_at: position " + p.to_string() + " out of range");
    Substitution subst;
    std::function<bool(Term::NodeId, Term::NodeId)> walk = [&](Term::NodeId pn,
                                                               Term::NodeId tn) -> bool {
        const auto& pat = pattern.node(pn);
        if (pat.is_var) {
            Term bound = t.rooted_at(tn);
            auto [it, inserted] = subst.emplace(pat.label, bound);
            if (!inserted) return eq_rational(it->second, bound);
            return true;
        }
        const auto& sub = t.node(tn);
        if (sub.is_var || sub.label != pat.label || sub.children.size() != pat.children.size())
            return false;
        for (size_t i = 0; i < pat.children.size(); ++i)
            if (!walk(pat.children[i], sub.children[i])) return false;
        return true;
    };
    if (!walk(pattern.root(), *start)) return std::nullopt;
    return subst;
}

Term apply_substitution(const Term& t, const Substitution& subst) {
    if (subst.empty()) return t;
    if (t.root_is_var()) {
        auto it = subst.find(t.node(t.root()).label);
        return it == subst.end() ? t : it->second;
    }
    std::vector<Term::Node> nodes = t.nodes();
    // Bring in one shared copy of each used binding and redirect var leaves.
    // Indexed access throughout: appending binding nodes reallocates.
    std::map<std::string, Term::NodeId> binding_root;
    size_t original = nodes.size();
    for (size_t i = 0; i < original; ++i) {
        if (nodes[i].is_var) continue;
        for (size_t k = 0; k < nodes[i].children.size(); ++k) {
            const Term::Node& child = t.node(nodes[i].children[k]);
            if (!child.is_var) continue;
            auto it = subst.find(child.label);
            if (it == subst.end()) continue;
            auto [br, inserted] = binding_root.emplace(child.label, 0);
            if (inserted) {
                Term::NodeId offset = static_cast<Term::NodeId>(nodes.size());
                for (const Term::Node& bn : it->second.nodes()) {
                    Term::Node copy = bn;
                    for (Term::NodeId& bc : copy.children) bc += offset;
                    nodes.push_back(std::move(copy));
                }
                br->second = offset + it->second.root();
            }
            nodes[i].children[k] = br->second;
        }
    }
    return Term::from_graph(std::move(nodes), t.root());
}

Term replace_at(const Term& t, const Position& p, const Term& u) {
    if (!node_at(t, p))
        throw position_error("replace_at: position " + p.to_string() + " out of range");
    if (p.is_root()) return u;
    std::vector<Term::Node> nodes = t.nodes();
    Term::NodeId u_offset = static_cast<Term::NodeId>(nodes.size());
    for (const Term::Node& n : u.nodes()) {
        Term::Node copy = n;
        for (Term::NodeId& c : copy.children) c += u_offset;
        nodes.push_back(std::move(copy));
    }
    Term::NodeId u_root = u_offset + u.root();

    // Unshare the path: fresh copies of the nodes above the replacement point
    // so that exactly one tree occurrence is affected.
    Term::NodeId cur = t.root();
    std::vector<Term::NodeId> fresh;
    for (int ix : p.path) {
        Term::Node copy = nodes[static_cast<size_t>(cur)];
        copy.rec_name.clear();  // the copy is no longer the binder occurrence
        fresh.push_back(static_cast<Term::NodeId>(nodes.size()));
        nodes.push_back(copy);
        cur = t.node(cur).children[static_cast<size_t>(ix - 1)];
    }
    for (size_t i = 0; i + 1 < fresh.size(); ++i)
        nodes[static_cast<size_t>(fresh[i])].children[static_cast<size_t>(p.path[i] - 1)] =
            fresh[i + 1];
    nodes[static_cast<size_t>(fresh.back())]
        .children[static_cast<size_t>(p.path.back() - 1)] = u_root;
    return Term::from_graph(std::move(nodes), fresh[0]);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Names handed out to unnamed cycle nodes when printing.
std::string fresh_rec_name(int k) {
    static const char* pool[] = {"X", "Y", "Z", "U", "V", "W"};
    if (k < 6) return pool[k];
    return "X" + std::to_string(k - 5);
}

}  // namespace

std::string to_string(const Term& t) {
    // Pass 1: find targets of back edges (nodes that need a rec binder).
    std::vector<int> state(t.node_count(), 0);  // 0 white, 1 on stack, 2 done
    std::vector<bool> needs_binder(t.node_count(), false);
    std::function<void(Term::NodeId)> mark = [&](Term::NodeId id) {
        state[static_cast<size_t>(id)] = 1;
        for (Term::NodeId c : t.node(id).children) {
            if (state[static_cast<size_t>(c)] == 1)
                needs_binder[static_cast<size_t>(c)] = true;
            else if (state[static_cast<size_t>(c)] == 0)
                mark(c);
        }
        state[static_cast<size_t>(id)] = 2;
    };
    mark(t.root());

    std::vector<std::string> binder_name(t.node_count());
    int next_name = 0;
    std::unordered_set<std::string> taken;
    for (size_t i = 0; i < t.node_count(); ++i) {
        if (!needs_binder[i]) continue;
        const std::string& given = t.node(static_cast<Term::NodeId>(i)).rec_name;
        std::string name = given;
        while (name.empty() || taken.count(name)) name = fresh_rec_name(next_name++);
        taken.insert(name);
        binder_name[i] = name;
    }

    std::vector<bool> open(t.node_count(), false);
    std::function<void(Term::NodeId, std::string&)> render = [&](Term::NodeId id,
                                                                 std::string& out) {
        size_t i = static_cast<size_t>(id);
        if (needs_binder[i] && open[i]) {
            out += binder_name[i];
            return;
        }
        if (needs_binder[i]) {
            open[i] = true;
            out += "rec " + binder_name[i] + " = ";
        }
        const auto& n = t.node(id);
        out += n.label;
        if (!n.children.empty()) {
            out += '(';
            for (size_t k = 0; k < n.children.size(); ++k) {
                if (k) out += ',';
                render(n.children[k], out);
            }
            out += ')';
        }
        if (needs_binder[i]) open[i] = false;
    };
    std::string out;
    render(t.root(), out);
    return out;
}

std::string to_string(const Substitution& subst) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : subst) {
        if (!first) out += ", ";
        first = false;
        out += v + " ↦ " + to_string(t);
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    int line = 1, col = 1;

    struct Token {
        enum Kind { Ident, LPar, RPar, Comma, Equals, KwRec, KwIn, Cut, End } kind;
        std::string value;
        int line, col;
    };

    Token next() {
        skip_ws();
        Token tok{Token::End, "", line, col};
        if (pos >= text.size()) return tok;
        char c = text[pos];
        if (c == '(') return take(Token::LPar, 1);
        if (c == ')') return take(Token::RPar, 1);
        if (c == ',') return take(Token::Comma, 1);
        if (c == '=') return take(Token::Equals, 1);
        if (text.substr(pos).starts_with(kCutMarker))
            return take(Token::Cut, kCutMarker.size());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                    text[pos] == '\''))
                advance();
            tok.value = std::string(text.substr(start, pos - start));
            if (tok.value == "rec")
                tok.kind = Token::KwRec;
            else if (tok.value == "in")
                tok.kind = Token::KwIn;
            else
                tok.kind = Token::Ident;
            return tok;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", line, col);
    }

    Token take(Token::Kind kind, size_t len) {
        Token tok{kind, std::string(text.substr(pos, len)), line, col};
        for (size_t i = 0; i < len; ++i) advance();
        return tok;
    }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
    }
};

struct TermParser {
    Lexer lex;
    Lexer::Token tok;
    const Signature& sig;
    std::vector<Term::Node> nodes;
    std::map<std::string, Term::NodeId> rec_env;

    TermParser(std::string_view text, const Signature& s) : lex{text}, sig(s) { tok = lex.next(); }

    void expect(Lexer::Token::Kind kind, const char* what) {
        if (tok.kind != kind) throw parse_error(std::string("expected ") + what, tok.line, tok.col);
        tok = lex.next();
    }

    Term::NodeId alloc(Term::Node n) {
        nodes.push_back(std::move(n));
        return static_cast<Term::NodeId>(nodes.size() - 1);
    }

    // expr := 'rec' UName '=' expr ['in' expr] | app
    Term::NodeId parse_expr() {
        if (tok.kind == Lexer::Token::KwRec) return parse_rec();
        return parse_app();
    }

    Term::NodeId parse_rec() {
        tok = lex.next();
        if (tok.kind != Lexer::Token::Ident || !std::isupper(static_cast<unsigned char>(tok.value[0])))
            throw parse_error("rec binder must be an uppercase identifier", tok.line, tok.col);
        if (sig.has(tok.value))
            throw parse_error("rec binder " + tok.value + " collides with a declared symbol",
                              tok.line, tok.col);
        std::string name = tok.value;
        int at_line = tok.line, at_col = tok.col;
        if (rec_env.count(name))
            throw parse_error("rec binder " + name + " shadows an enclosing binder", at_line, at_col);
        tok = lex.next();
        expect(Lexer::Token::Equals, "'='");

        Term::Node placeholder;
        placeholder.label = "$rec$" + name;
        placeholder.is_var = true;
        Term::NodeId hole = alloc(placeholder);
        rec_env[name] = hole;
        Term::NodeId body = parse_expr();
        rec_env.erase(name);
        if (body == hole)
            throw parse_error("unguarded recursion: rec " + name + " = " + name, at_line, at_col);
        // Patch every reference to the placeholder to point at the body.
        for (auto& n : nodes)
            for (Term::NodeId& c : n.children)
                if (c == hole) c = body;
        nodes[static_cast<size_t>(body)].rec_name = name;

        if (tok.kind == Lexer::Token::KwIn) {
            tok = lex.next();
            rec_env[name] = body;
            Term::NodeId cont = parse_expr();
            rec_env.erase(name);
            return cont;
        }
        return body;
    }

    Term::NodeId parse_app() {
        if (tok.kind == Lexer::Token::Cut) {
            tok = lex.next();
            Term::Node n;
            n.label = kCutMarker;
            return alloc(n);
        }
        if (tok.kind != Lexer::Token::Ident)
            throw parse_error("expected a term", tok.line, tok.col);
        std::string name = tok.value;
        int at_line = tok.line, at_col = tok.col;
        tok = lex.next();

        // Declared symbols win; otherwise uppercase names are recursion
        // variables and lowercase names are term variables.
        if (!sig.has(name) && std::isupper(static_cast<unsigned char>(name[0]))) {
            auto it = rec_env.find(name);
            if (it == rec_env.end())
                throw parse_error("unbound recursion variable " + name, at_line, at_col);
            return it->second;
        }

        std::vector<Term::NodeId> args;
        bool applied = false;
        if (tok.kind == Lexer::Token::LPar) {
            applied = true;
            tok = lex.next();
            if (tok.kind != Lexer::Token::RPar) {
                args.push_back(parse_expr());
                while (tok.kind == Lexer::Token::Comma) {
                    tok = lex.next();
                    args.push_back(parse_expr());
                }
            }
            expect(Lexer::Token::RPar, "')'");
        }

        auto declared = sig.arity(name);
        if (applied || declared) {
            if (!declared)
                throw parse_error("undeclared symbol " + name, at_line, at_col);
            if (*declared != static_cast<int>(args.size()))
                throw parse_error("symbol " + name + " expects " + std::to_string(*declared) +
                                      " arguments, got " + std::to_string(args.size()),
                                  at_line, at_col);
            Term::Node n;
            n.label = name;
            n.children = args;
            return alloc(n);
        }
        Term::Node n;
        n.label = name;
        n.is_var = true;
        return alloc(n);
    }

    Term run() {
        Term::NodeId root = parse_expr();
        if (tok.kind != Lexer::Token::End)
            throw parse_error("trailing input after term", tok.line, tok.col);
        return Term::from_graph(std::move(nodes), root);
    }
};

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
    return TermParser(text, sig).run();
}

}  // namespace wo
