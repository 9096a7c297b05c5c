#include "wo/sequence.hpp"

#include <algorithm>
#include <sstream>

namespace wo {

namespace {

class FiniteStream final : public StepStream {
  public:
    explicit FiniteStream(std::vector<StepDesc> steps) : steps_(std::move(steps)) {}
    bool finite() const override { return true; }
    long length() const override { return static_cast<long>(steps_.size()); }
    StepDesc step(long i) const override { return steps_.at(static_cast<size_t>(i)); }
    bool has_modulus() const override { return true; }
    long modulus(int) const override { return length(); }

  private:
    std::vector<StepDesc> steps_;
};

class OmegaStream final : public StepStream {
  public:
    OmegaStream(std::function<StepDesc(long)> gen, std::function<long(int)> modulus)
        : gen_(std::move(gen)), modulus_(std::move(modulus)) {}
    bool finite() const override { return false; }
    long length() const override { throw input_error("omega stream has no finite length"); }
    StepDesc step(long i) const override { return gen_(i); }
    bool has_modulus() const override { return modulus_ != nullptr; }
    long modulus(int depth) const override {
        if (!modulus_) throw budget_error("modulus unavailable: the stream is divergent");
        return modulus_(depth);
    }

  private:
    std::function<StepDesc(long)> gen_;
    std::function<long(int)> modulus_;
};

}  // namespace

std::shared_ptr<StepStream> finite_steps(std::vector<StepDesc> steps) {
    return std::make_shared<FiniteStream>(std::move(steps));
}

std::shared_ptr<StepStream> omega_steps(std::function<StepDesc(long)> gen,
                                        std::function<long(int)> modulus) {
    if (!modulus) throw input_error("omega_steps: a modulus is required");
    return std::make_shared<OmegaStream>(std::move(gen), std::move(modulus));
}

std::shared_ptr<StepStream> divergent_steps(std::function<StepDesc(long)> gen) {
    return std::make_shared<OmegaStream>(std::move(gen), nullptr);
}

int SegSeq::omega_segments() const {
    int k = 0;
    for (const Segment& s : segments)
        if (!s.finite()) ++k;
    return k;
}

long SegSeq::finite_step_count() const {
    long m = 0;
    for (const Segment& s : segments)
        if (s.finite()) m += s.steps->length();
    return m;
}

bool SegSeq::finite() const { return omega_segments() == 0; }

std::string SegSeq::order_type() const {
    int k = omega_segments();
    long m = finite_step_count();
    if (k == 0) return std::to_string(m);
    std::string out = k == 1 ? "ω" : "ω*" + std::to_string(k);
    if (m > 0) out += "+" + std::to_string(m);
    return out;
}

Materialized materialize(const TRS& trs, const SegSeq& seq, int D) {
    Materialized out;
    out.exhausted = true;
    out.skipped_above = D;
    Term cur = seq.source;
    for (size_t si = 0; si < seq.segments.size(); ++si) {
        const Segment& seg = seq.segments[si];
        long n = seg.finite() ? seg.steps->length() : seg.steps->modulus(D);
        for (long i = 0; i < n; ++i) {
            StepDesc sd = seg.steps->step(i);
            RewriteStep st = make_step(trs, cur, Redex{sd.pos, sd.rule});
            cur = st.target;
            out.steps.push_back(std::move(st));
        }
        if (!seg.finite()) {
            out.exhausted = false;
            if (seg.limit) {
                if (!eq_to_depth(cur, *seg.limit, D))
                    throw input_error(
                        "materialize: declared omega limit disagrees with the computed prefix "
                        "at depth " +
                        std::to_string(D));
                cur = *seg.limit;
            } else if (si + 1 < seq.segments.size()) {
                throw input_error(
                    "materialize: an omega segment followed by further segments must declare "
                    "its limit");
            }
        }
    }
    out.end = cur;
    return out;
}

std::optional<int> min_step_depth(const TRS& trs, const SegSeq& seq) {
    std::optional<int> best;
    auto feed = [&](int depth) {
        if (!best || depth < *best) best = depth;
    };
    for (const Segment& seg : seq.segments) {
        if (seg.finite()) {
            for (long i = 0; i < seg.steps->length(); ++i) feed(seg.steps->step(i).pos.depth());
        } else {
            // Every step at depth <= depth(step 0) has index < modulus of
            // that depth, so one bounded scan finds the segment minimum.
            int d0 = seg.steps->step(0).pos.depth();
            feed(d0);
            long upto = seg.steps->modulus(d0);
            for (long i = 0; i < upto; ++i) feed(seg.steps->step(i).pos.depth());
        }
    }
    (void)trs;
    return best;
}

long count_steps_at_depth(const TRS& trs, const SegSeq& seq, int depth) {
    (void)trs;
    long count = 0;
    for (const Segment& seg : seq.segments) {
        long upto = seg.finite() ? seg.steps->length() : seg.steps->modulus(depth);
        for (long i = 0; i < upto; ++i)
            if (seg.steps->step(i).pos.depth() == depth) ++count;
    }
    return count;
}

// ---------------------------------------------------------------------------
// Built-in generators
// ---------------------------------------------------------------------------

std::shared_ptr<StepStream> builtin_stream(const std::string& name) {
    if (name == "a_unfold") {
        // On h(a): a -> g(a) under h, ever deeper. Step j at 1.1^j, depth j+1.
        return omega_steps(
            [](long j) {
                Position p{1};
                for (long k = 0; k < j; ++k) p.path.push_back(1);
                return StepDesc{p, "au"};
            },
            [](int d) { return static_cast<long>(d); });
    }
    if (name == "or_unfold") {
        // On c: c -> or(true,c) along the right spine. Step j at 2^j, depth j.
        return omega_steps(
            [](long j) {
                Position p;
                for (long k = 0; k < j; ++k) p.path.push_back(2);
                return StepDesc{p, "cu"};
            },
            [](int d) { return static_cast<long>(d) + 1; });
    }
    if (name == "or_unfold_left") {
        // On or(c,t): the same unfolding inside the first argument.
        return omega_steps(
            [](long j) {
                Position p{1};
                for (long k = 0; k < j; ++k) p.path.push_back(2);
                return StepDesc{p, "cu"};
            },
            [](int d) { return static_cast<long>(d); });
    }
    if (name == "sp_loop") {
        // On rec X = S(P(X)): the root SP redex reappears forever.
        return divergent_steps([](long) { return StepDesc{Position{}, "SP"}; });
    }
    if (name == "r_unfold") {
        // On r(a): one root loop step, then a -> g(a) ever deeper.
        return omega_steps(
            [](long j) {
                if (j == 0) return StepDesc{Position{}, "rr"};
                Position p{1};
                for (long k = 1; k < j; ++k) p.path.push_back(1);
                return StepDesc{p, "au"};
            },
            [](int d) { return static_cast<long>(d) + 1; });
    }
    if (name == "r_loop") {
        // On r(t): the root rr redex loops forever.
        return divergent_steps([](long) { return StepDesc{Position{}, "rr"}; });
    }
    throw input_error("unknown builtin generator: " + name);
}

std::vector<std::string> builtin_stream_names() {
    return {"a_unfold", "or_unfold", "or_unfold_left", "sp_loop", "r_loop", "r_unfold"};
}

// ---------------------------------------------------------------------------
// Sequence files
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

SegSeq parse_sequence(std::string_view text, const TRS& trs) {
    SegSeq seq;
    bool have_term = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos) throw parse_error("expected `key: value`", lineno, 1);
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "term") {
            seq.source = parse_term(value, trs.sig);
            have_term = true;
        } else if (key == "steps" || key == "seq") {
            std::vector<StepDesc> steps;
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ';')) {
                item = trim(item);
                if (item.empty()) continue;
                if (item.rfind("step ", 0) == 0) item = trim(item.substr(5));
                size_t c = item.find(':');
                if (c == std::string::npos)
                    throw parse_error("expected `<pos>:<rule>`: " + item, lineno, 1);
                StepDesc sd;
                sd.pos = Position::parse(item.substr(0, c));
                sd.rule = trim(item.substr(c + 1));
                trs.rule(sd.rule);
                steps.push_back(std::move(sd));
            }
            seq.segments.push_back(Segment{finite_steps(std::move(steps)), std::nullopt});
        } else if (key == "omega") {
            std::string gen_name;
            std::istringstream items(value);
            std::string item;
            while (items >> item) {
                size_t eq = item.find('=');
                if (eq == std::string::npos)
                    throw parse_error("expected `gen=<name>`: " + item, lineno, 1);
                std::string k = item.substr(0, eq), v = item.substr(eq + 1);
                if (k == "gen")
                    gen_name = v;
                else if (k == "modulus")
                    ;  // builtins carry their own modulus
                else
                    throw parse_error("unknown omega attribute " + k, lineno, 1);
            }
            if (gen_name.empty()) throw parse_error("omega needs gen=<name>", lineno, 1);
            seq.segments.push_back(Segment{builtin_stream(gen_name), std::nullopt});
        } else if (key == "limit") {
            if (seq.segments.empty() || seq.segments.back().finite())
                throw parse_error("limit must follow an omega segment", lineno, 1);
            seq.segments.back().limit = parse_term(value, trs.sig);
        } else {
            throw parse_error("unknown key `" + key + "`", lineno, 1);
        }
    }
    if (!have_term) throw input_error("sequence file must declare `term:`");
    return seq;
}

}  // namespace wo
