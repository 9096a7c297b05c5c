#include "wo/sp.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace wo {

namespace {

constexpr long kOracleScan = 20000;

char flip(char c) { return c == 'S' ? 'P' : 'S'; }

void check_letters(const std::string& s) {
    for (char c : s)
        if (c != 'S' && c != 'P') throw input_error("SP word letters must be S or P");
}

}  // namespace

// ---------------------------------------------------------------------------
// SPWord
// ---------------------------------------------------------------------------

SPWord SPWord::eventually_periodic(std::string prefix, std::string period) {
    check_letters(prefix);
    check_letters(period);
    if (period.empty()) throw input_error("SP word period must be non-empty");
    SPWord w;
    w.kind_ = Kind::EventuallyPeriodic;
    w.prefix_ = std::move(prefix);
    w.period_ = std::move(period);
    return w;
}

SPWord SPWord::blocks(char first, long c, long a, long k) {
    if (first != 'S' && first != 'P') throw input_error("block first letter must be S or P");
    if (c < 1 || a < 0 || k < 1) throw input_error("block spec needs c >= 1, a >= 0, k >= 1");
    SPWord w;
    w.kind_ = Kind::BlockSpec;
    w.first_ = first;
    w.c_ = c;
    w.a_ = a;
    w.k_ = k;
    return w;
}

SPWord SPWord::oracle(std::function<char(long)> letter) {
    if (!letter) throw input_error("oracle word needs a letter function");
    SPWord w;
    w.kind_ = Kind::OracleBacked;
    w.oracle_ = std::move(letter);
    return w;
}

char SPWord::letter(long n) const {
    if (n < 0) throw input_error("letter index must be non-negative");
    switch (kind_) {
        case Kind::EventuallyPeriodic: {
            long p = static_cast<long>(prefix_.size());
            if (n < p) return prefix_[static_cast<size_t>(n)];
            return period_[static_cast<size_t>((n - p) % static_cast<long>(period_.size()))];
        }
        case Kind::BlockSpec: {
            long j = 0, cum = 0;
            for (;;) {
                long len = c_ + a_ * (j / k_);
                if (n < cum + len) return j % 2 == 0 ? first_ : flip(first_);
                cum += len;
                ++j;
            }
        }
        case Kind::OracleBacked: {
            char c = oracle_(n);
            if (c != 'S' && c != 'P') throw input_error("oracle produced a letter not in {S,P}");
            return c;
        }
    }
    throw input_error("letter: bad word kind");
}

std::string SPWord::prefix(long n) const {
    std::string out;
    out.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) out.push_back(letter(i));
    return out;
}

SPWord make_q() { return SPWord::blocks('S', 1, 1, 1); }
SPWord make_r() { return SPWord::blocks('S', 1, 1, 2); }

long sp_sum(const SPWord& w, long n) {
    long s = 0;
    for (long i = 0; i < n; ++i) s += w.letter(i) == 'S' ? 1 : -1;
    return s;
}

std::vector<std::pair<long, long>> sum_graph(const SPWord& w, long n) {
    std::vector<std::pair<long, long>> out;
    out.reserve(static_cast<size_t>(n) + 1);
    long s = 0;
    out.emplace_back(0, 0);
    for (long i = 0; i < n; ++i) {
        s += w.letter(i) == 'S' ? 1 : -1;
        out.emplace_back(i + 1, s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

std::string Height::to_string() const {
    std::string s;
    switch (kind) {
        case Kind::PosInf: s = "+∞"; break;
        case Kind::NegInf: s = "-∞"; break;
        case Kind::Finite: s = std::to_string(value); break;
    }
    return exact ? s : s + " (estimate)";
}

namespace {

Height finite_exact(long v) { return Height{Height::Kind::Finite, v, true}; }

// Boundary-line analysis of the block family: the walk's extremes over all n
// are attained at block boundaries (blocks are monotone), and each residue
// class of boundaries modulo 2k is eventually an exact arithmetic line.
struct BlockLines {
    long two_k = 0;
    std::vector<long> base;   // value at the reference superperiod
    std::vector<long> slope;  // increment per superperiod
    long scan_min = 0, scan_max = 0;  // extremes over the scanned boundaries
    long letters_scanned = 0;
};

BlockLines block_lines(const SPWord& w) {
    long k = w.block_k();
    long two_k = 2 * k;
    long blocks = 6 * two_k + 4;
    BlockLines lines;
    lines.two_k = two_k;
    std::vector<long> B{0};
    long sum = 0, letters = 0;
    for (long j = 0; j < blocks; ++j) {
        long len = w.block_c() + w.block_a() * (j / k);
        long sign = (j % 2 == 0) == (w.first_letter() == 'S') ? 1 : -1;
        sum += sign * len;
        letters += len;
        B.push_back(sum);
    }
    lines.letters_scanned = letters;
    lines.scan_min = *std::min_element(B.begin(), B.end());
    lines.scan_max = *std::max_element(B.begin(), B.end());
    // Reference the lines at the third superperiod and verify stability.
    long s0 = 2 * two_k;
    lines.base.resize(static_cast<size_t>(two_k));
    lines.slope.resize(static_cast<size_t>(two_k));
    for (long r = 0; r < two_k; ++r) {
        long i0 = s0 + r;
        long d1 = B[static_cast<size_t>(i0 + two_k)] - B[static_cast<size_t>(i0)];
        long d2 = B[static_cast<size_t>(i0 + 2 * two_k)] - B[static_cast<size_t>(i0 + two_k)];
        if (d1 != d2)
            throw property_violation("block boundary lines are not arithmetic");
        lines.base[static_cast<size_t>(r)] = B[static_cast<size_t>(i0)];
        lines.slope[static_cast<size_t>(r)] = d1;
    }
    return lines;
}

// Eventual sign of an arithmetic line: +1, -1, or 0 for the constant zero.
int eventual_sign(long base, long slope) {
    if (slope > 0) return 1;
    if (slope < 0) return -1;
    return base > 0 ? 1 : base < 0 ? -1 : 0;
}

Heights heights_ep(const SPWord& w) {
    const std::string& prefix = w.ep_prefix();
    const std::string& period = w.ep_period();
    long drift = 0;
    for (char c : period) drift += c == 'S' ? 1 : -1;
    long window = static_cast<long>(prefix.size() + 2 * period.size());
    long sum = 0, lo = 0, hi = 0;
    for (long i = 0; i < window; ++i) {
        sum += w.letter(i) == 'S' ? 1 : -1;
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
    }
    Heights h;
    h.evidence_prefix = window;
    if (drift > 0) {
        h.upper = Height{Height::Kind::PosInf, 0, true};
        h.lower = finite_exact(lo);
    } else if (drift < 0) {
        h.upper = finite_exact(hi);
        h.lower = Height{Height::Kind::NegInf, 0, true};
    } else {
        h.upper = finite_exact(hi);
        h.lower = finite_exact(lo);
    }
    return h;
}

Heights heights_blocks(const SPWord& w) {
    if (w.block_a() == 0) {
        // Constant blocks: the word is purely periodic.
        std::string period;
        for (long j = 0; j < 2; ++j)
            period.append(static_cast<size_t>(w.block_c()),
                          j % 2 == 0 ? w.first_letter() : flip(w.first_letter()));
        return heights_ep(SPWord::eventually_periodic("", period));
    }
    BlockLines lines = block_lines(w);
    Heights h;
    h.evidence_prefix = lines.letters_scanned;
    bool up = false, down = false;
    for (long s : lines.slope) {
        up = up || s > 0;
        down = down || s < 0;
    }
    h.upper = up ? Height{Height::Kind::PosInf, 0, true} : finite_exact(lines.scan_max);
    h.lower = down ? Height{Height::Kind::NegInf, 0, true} : finite_exact(lines.scan_min);
    return h;
}

Heights heights_oracle(const SPWord& w) {
    Heights h;
    long sum = 0, lo = 0, hi = 0;
    for (long i = 0; i < kOracleScan; ++i) {
        sum += w.letter(i) == 'S' ? 1 : -1;
        lo = std::min(lo, sum);
        hi = std::max(hi, sum);
    }
    h.upper = Height{Height::Kind::Finite, hi, false};
    h.lower = Height{Height::Kind::Finite, lo, false};
    h.evidence_prefix = kOracleScan;
    return h;
}

}  // namespace

Heights heights(const SPWord& w) {
    switch (w.kind()) {
        case SPWord::Kind::EventuallyPeriodic: return heights_ep(w);
        case SPWord::Kind::BlockSpec: return heights_blocks(w);
        case SPWord::Kind::OracleBacked: return heights_oracle(w);
    }
    throw input_error("heights: bad word kind");
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "unknown";
    }
}

SPClassification classify(const SPWord& w) {
    SPClassification c;
    c.h = heights(w);

    auto from_height = [](const Height& h, Height::Kind inf) {
        if (!h.exact) return Verdict::Unknown;
        return h.kind == inf ? Verdict::Yes : Verdict::No;
    };
    c.in_A = from_height(c.h.upper, Height::Kind::PosInf);
    c.in_B = from_height(c.h.lower, Height::Kind::NegInf);

    switch (w.kind()) {
        case SPWord::Kind::EventuallyPeriodic: {
            long drift = 0;
            for (char ch : w.ep_period()) drift += ch == 'S' ? 1 : -1;
            if (drift != 0) {
                c.root_active = Verdict::No;
                c.sn_inf = Verdict::Yes;
            } else {
                // The walk is periodic beyond the prefix; a zero there
                // recurs forever.
                long p = static_cast<long>(w.ep_prefix().size());
                long period = static_cast<long>(w.ep_period().size());
                long sum = sp_sum(w, p);
                bool zero = false;
                for (long n = p + 1; n <= p + 2 * period; ++n) {
                    sum += w.letter(n - 1) == 'S' ? 1 : -1;
                    if (sum == 0) zero = true;
                }
                c.root_active = zero ? Verdict::Yes : Verdict::No;
                c.sn_inf = Verdict::No;  // a bounded walk revisits some value
            }
            break;
        }
        case SPWord::Kind::BlockSpec: {
            if (w.block_a() == 0) {
                std::string period;
                for (long j = 0; j < 2; ++j)
                    period.append(static_cast<size_t>(w.block_c()),
                                  j % 2 == 0 ? w.first_letter() : flip(w.first_letter()));
                SPClassification ep = classify(SPWord::eventually_periodic("", period));
                c.root_active = ep.root_active;
                c.sn_inf = ep.sn_inf;
                break;
            }
            BlockLines lines = block_lines(w);
            bool touch_zero = false, straddle = false;
            bool all_up = true, all_down = true;
            std::vector<int> es(static_cast<size_t>(lines.two_k));
            for (long r = 0; r < lines.two_k; ++r) {
                es[static_cast<size_t>(r)] = eventual_sign(lines.base[static_cast<size_t>(r)],
                                                           lines.slope[static_cast<size_t>(r)]);
                if (es[static_cast<size_t>(r)] == 0) touch_zero = true;
                all_up = all_up && lines.slope[static_cast<size_t>(r)] > 0;
                all_down = all_down && lines.slope[static_cast<size_t>(r)] < 0;
            }
            for (long r = 0; r < lines.two_k; ++r) {
                int a = es[static_cast<size_t>(r)];
                int b = es[static_cast<size_t>((r + 1) % lines.two_k)];
                if (a != 0 && b != 0 && a != b) straddle = true;
            }
            c.root_active = touch_zero || straddle ? Verdict::Yes : Verdict::No;
            c.sn_inf = all_up || all_down ? Verdict::Yes : Verdict::No;
            break;
        }
        case SPWord::Kind::OracleBacked:
            c.root_active = Verdict::Unknown;
            c.sn_inf = Verdict::Unknown;
            break;
    }

    // A word cannot be both strongly normalizing and root-active.
    if (c.sn_inf == Verdict::Yes && c.root_active == Verdict::Yes)
        throw property_violation("classify: sn_inf and root_active cannot both hold");
    return c;
}

// ---------------------------------------------------------------------------
// Zero-word factorization
// ---------------------------------------------------------------------------

namespace {

// Number of letters after which no zero crossing can occur; nullopt when
// zeros recur forever (root-active) or the word is oracle-backed.
std::optional<long> zero_scan_bound(const SPWord& w) {
    switch (w.kind()) {
        case SPWord::Kind::OracleBacked: return kOracleScan;
        case SPWord::Kind::EventuallyPeriodic: {
            long p = static_cast<long>(w.ep_prefix().size());
            long q = static_cast<long>(w.ep_period().size());
            long drift = 0, rel = 0, rel_min = 0, rel_max = 0;
            for (char ch : w.ep_period()) {
                rel += ch == 'S' ? 1 : -1;
                rel_min = std::min(rel_min, rel);
                rel_max = std::max(rel_max, rel);
            }
            drift = rel;
            if (drift == 0) {
                // The walk repeats beyond the prefix: a zero there recurs
                // forever, otherwise none can follow the window.
                long sum = sp_sum(w, p);
                for (long n = p + 1; n <= p + 2 * q; ++n) {
                    sum += w.letter(n - 1) == 'S' ? 1 : -1;
                    if (sum == 0) return std::nullopt;
                }
                return p + 2 * q;
            }
            long s0 = sp_sum(w, p);
            // From the i-th period boundary all later values differ from
            // s0 + i*drift by at most one period's excursion.
            long need = drift > 0 ? 1 - s0 - rel_min : -1 - s0 - rel_max;
            long i0 = std::max(0L, (std::abs(need) + std::abs(drift) - 1) / std::abs(drift) + 1);
            return p + (i0 + 1) * q;
        }
        case SPWord::Kind::BlockSpec: {
            if (w.block_a() == 0) {
                std::string period;
                for (long j = 0; j < 2; ++j)
                    period.append(static_cast<size_t>(w.block_c()),
                                  j % 2 == 0 ? w.first_letter() : flip(w.first_letter()));
                return zero_scan_bound(SPWord::eventually_periodic("", period));
            }
            BlockLines lines = block_lines(w);
            // Superperiod index after which every boundary line has settled
            // to a non-zero sign; the walk is monotone between boundaries.
            long settle = 2;
            for (long r = 0; r < lines.two_k; ++r) {
                long base = lines.base[static_cast<size_t>(r)];
                long slope = lines.slope[static_cast<size_t>(r)];
                if (slope == 0) {
                    if (base == 0) return std::nullopt;  // touches zero forever
                    continue;
                }
                // v(i) = base + slope*(i-2); find i with |v| >= 1 and sign(v)
                // equal to sign(slope) from there on.
                long i = 2 + std::max(0L, (std::abs(base) + std::abs(slope) - 1) /
                                              std::abs(slope) + 1);
                settle = std::max(settle, i);
            }
            // Straddling boundary pairs keep producing zeros forever.
            for (long r = 0; r < lines.two_k; ++r) {
                int a = eventual_sign(lines.base[static_cast<size_t>(r)],
                                      lines.slope[static_cast<size_t>(r)]);
                int b = eventual_sign(lines.base[static_cast<size_t>((r + 1) % lines.two_k)],
                                      lines.slope[static_cast<size_t>((r + 1) % lines.two_k)]);
                if (a != 0 && b != 0 && a != b) return std::nullopt;
            }
            long block_count = lines.two_k * (settle + 2);
            long letters = 0;
            for (long j = 0; j < block_count; ++j)
                letters += w.block_c() + w.block_a() * (j / w.block_k());
            return letters;
        }
    }
    return kOracleScan;
}

}  // namespace

ZeroFactorization zero_word_factorization(const SPWord& w, long k) {
    if (k < 1) throw input_error("zero_word_factorization: k must be positive");
    ZeroFactorization out;

    std::optional<long> stop = zero_scan_bound(w);
    long sum = 0;
    std::string factor;
    long n = 0;
    long guard = 50L * 1000 * 1000;
    while (static_cast<long>(out.factors.size()) < k && (!stop || n < *stop)) {
        if (--guard < 0) throw budget_error("zero_word_factorization: scan guard exceeded");
        char ch = w.letter(n);
        factor.push_back(ch);
        sum += ch == 'S' ? 1 : -1;
        ++n;
        if (sum == 0) {
            out.factors.push_back(factor);
            factor.clear();
        }
    }
    out.prefix_examined = n;
    out.ok = static_cast<long>(out.factors.size()) == k;
    if (!out.ok) out.factors.clear();
    return out;
}

// ---------------------------------------------------------------------------
// Reduction witnesses
// ---------------------------------------------------------------------------

TRS sp_trs() {
    return parse_trs(
        "sig S/1 P/1\n"
        "rule PS : P(S(x)) -> x\n"
        "rule SP : S(P(x)) -> x\n");
}

Term sp_prefix_term(const SPWord& w, long n) {
    Term t = Term::cut();
    for (long i = n - 1; i >= 0; --i) t = Term::fun(std::string(1, w.letter(i)), {t});
    return t;
}

ReductionWitness reduce_toward(const SPWord& w, char target, int d, long prefix_budget) {
    if (target != 'S' && target != 'P') throw input_error("reduce_toward: target must be S or P");
    if (d < 1) throw input_error("reduce_toward: depth must be positive");

    // Height precondition: the walk must reach +-d.
    Heights h = heights(w);
    const Height& side = target == 'S' ? h.upper : h.lower;
    long goal = target == 'S' ? d : -d;
    if (side.exact && side.kind == Height::Kind::Finite && std::abs(side.value) < d)
        throw input_error(std::string("reduce_toward: insufficient height; the ") +
                          (target == 'S' ? "upper" : "lower") + " height is " + side.to_string());

    // First index where the walk hits the goal.
    long sum = 0, m = -1;
    for (long i = 0; i < prefix_budget; ++i) {
        sum += w.letter(i) == 'S' ? 1 : -1;
        if (sum == goal) {
            m = i + 1;
            break;
        }
    }
    if (m < 0)
        throw budget_error("reduce_toward: the walk did not reach the target height within " +
                           std::to_string(prefix_budget) + " letters");

    ReductionWitness out;
    out.prefix_length = m;
    out.start = sp_prefix_term(w, m);

    TRS trs = sp_trs();
    std::string word = w.prefix(m);
    Term cur = out.start;
    const char a = target == 'S' ? 'P' : 'S';  // cancel the pair a,target...
    const std::string rule = target == 'S' ? "PS" : "SP";
    for (;;) {
        size_t at = std::string::npos;
        for (size_t i = 0; i + 1 < word.size(); ++i)
            if (word[i] == a && word[i + 1] == target) {
                at = i;
                break;
            }
        if (at == std::string::npos) break;
        Position pos;
        pos.path.assign(at, 1);
        RewriteStep st = make_step(trs, cur, Redex{pos, rule});
        cur = st.target;
        out.steps.push_back(std::move(st));
        word.erase(at, 2);
    }
    if (word != std::string(static_cast<size_t>(d), target))
        throw property_violation("reduce_toward: cancellation did not leave " +
                                 std::string(1, target) + "^" + std::to_string(d));
    out.result = cur;
    return out;
}

// ---------------------------------------------------------------------------
// Literals
// ---------------------------------------------------------------------------

SPWord parse_word(std::string_view text) {
    std::string s{text};
    if (s == "q") return make_q();
    if (s == "r") return make_r();
    if (s.rfind("ep:", 0) == 0) {
        std::string rest = s.substr(3);
        size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw input_error("expected ep:<prefix>:<period>");
        return SPWord::eventually_periodic(rest.substr(0, colon), rest.substr(colon + 1));
    }
    if (s.rfind("blocks:", 0) == 0) {
        std::string rest = s.substr(7);
        size_t colon = rest.find(':');
        if (colon != 1 || (rest[0] != 'S' && rest[0] != 'P'))
            throw input_error("expected blocks:<S|P>:<c>,<a>,<k>");
        char first = rest[0];
        std::istringstream nums(rest.substr(2));
        long c, a, k;
        char comma1, comma2;
        if (!(nums >> c >> comma1 >> a >> comma2 >> k) || comma1 != ',' || comma2 != ',')
            throw input_error("expected blocks:<S|P>:<c>,<a>,<k>");
        return SPWord::blocks(first, c, a, k);
    }
    throw input_error("unknown word literal: " + s + " (use q, r, ep:..., blocks:...)");
}

}  // namespace wo
