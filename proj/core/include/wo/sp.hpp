#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wo/redex.hpp"

namespace wo {

/// An infinite word over {S,P}, standing for the unary term that spells it.
class SPWord {
  public:
    enum class Kind { EventuallyPeriodic, BlockSpec, OracleBacked };

    /// prefix then period, repeated forever.
    static SPWord eventually_periodic(std::string prefix, std::string period);
    /// Alternating letter blocks starting with `first`; block j has length
    /// c + a * (j / k)  (k copies of each length, growing by a).
    static SPWord blocks(char first, long c, long a, long k);
    /// Deterministic but otherwise opaque letter source; analyses degrade to
    /// estimates.
    static SPWord oracle(std::function<char(long)> letter);

    Kind kind() const { return kind_; }
    char letter(long n) const;  // 'S' or 'P'
    std::string prefix(long n) const;

    // Representation accessors (valid for the matching kind).
    const std::string& ep_prefix() const { return prefix_; }
    const std::string& ep_period() const { return period_; }
    char first_letter() const { return first_; }
    long block_c() const { return c_; }
    long block_a() const { return a_; }
    long block_k() const { return k_; }

  private:
    Kind kind_;
    std::string prefix_, period_;            // EventuallyPeriodic
    char first_ = 'S';                       // BlockSpec
    long c_ = 1, a_ = 0, k_ = 1;             // BlockSpec
    std::function<char(long)> oracle_;       // OracleBacked
};

SPWord make_q();  // S P^2 S^3 P^4 ...
SPWord make_r();  // S P S^2 P^2 S^3 P^3 ...

/// Sum of +1 per S and -1 per P over the first n letters; sum(w,0) = 0.
long sp_sum(const SPWord& w, long n);

/// The first n+1 partial sums as (index, value) pairs.
std::vector<std::pair<long, long>> sum_graph(const SPWord& w, long n);

struct Height {
    enum class Kind { Finite, PosInf, NegInf };
    Kind kind = Kind::Finite;
    long value = 0;  // the finite value, or the observed bound for estimates
    bool exact = true;

    bool operator==(const Height& o) const {
        return kind == o.kind && (kind != Kind::Finite || value == o.value) && exact == o.exact;
    }
    std::string to_string() const;
};

struct Heights {
    Height upper;
    Height lower;
    long evidence_prefix = 0;  // letters examined for estimates
};

/// sup / inf of the prefix-sum walk over n >= 0 (so upper >= 0 >= lower).
/// Exact for eventually periodic words (period drift analysis) and for the
/// block family; oracle-backed words yield estimates over a prefix.
Heights heights(const SPWord& w);

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);

struct SPClassification {
    Heights h;
    Verdict in_A = Verdict::Unknown;        // reduces to S^omega
    Verdict in_B = Verdict::Unknown;        // reduces to P^omega
    Verdict root_active = Verdict::Unknown; // sum zero infinitely often
    Verdict sn_inf = Verdict::Unknown;      // every value attained finitely often
};

SPClassification classify(const SPWord& w);

struct ZeroFactorization {
    bool ok = false;
    std::vector<std::string> factors;  // the first k zero words, when ok
    long prefix_examined = 0;          // diagnostics on failure
};

/// Greedy factorization at the zero crossings of the prefix-sum walk.
ZeroFactorization zero_word_factorization(const SPWord& w, long k);

struct ReductionWitness {
    std::vector<RewriteStep> steps;  // validated S/P contractions
    Term start;                      // prefix of w with a cut-marker tail
    Term result;                     // target-letter^d followed by the marker
    long prefix_length = 0;
};

/// A finite reduction witnessing w ->> target^d ...: take the prefix up to
/// the first time the walk hits +-d, then cancel the leftmost PS (target S)
/// or SP (target P) pair until none remains. Throws input_error when the
/// height precondition fails, budget_error when an oracle prefix runs out.
ReductionWitness reduce_toward(const SPWord& w, char target, int d,
                               long prefix_budget = 200000);

/// The unary-term rendering of a finite prefix with a cut-marker tail.
Term sp_prefix_term(const SPWord& w, long n);

/// The signature {S/1, P/1} and the two collapsing rules PS and SP.
TRS sp_trs();

/// Word literals: `q`, `r`, `ep:<prefix>:<period>`, `blocks:<S|P>:<c>,<a>,<k>`.
SPWord parse_word(std::string_view text);

}  // namespace wo
