#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wo/redex.hpp"

namespace wo {

/// One step of a described sequence: contract `rule` at `pos`.
struct StepDesc {
    Position pos;
    std::string rule;
};

/// A finite or omega-long source of step descriptions. Omega streams are
/// strongly convergent when they carry a modulus: an index after which every
/// step is deeper than the queried depth. Divergent streams have none.
class StepStream {
  public:
    virtual ~StepStream() = default;
    virtual bool finite() const = 0;
    virtual long length() const = 0;  // finite streams only
    virtual StepDesc step(long i) const = 0;
    virtual bool has_modulus() const = 0;
    virtual long modulus(int depth) const = 0;
};

std::shared_ptr<StepStream> finite_steps(std::vector<StepDesc> steps);
std::shared_ptr<StepStream> omega_steps(std::function<StepDesc(long)> gen,
                                        std::function<long(int)> modulus);
/// An omega stream without a convergence modulus.
std::shared_ptr<StepStream> divergent_steps(std::function<StepDesc(long)> gen);

/// One segment of a segmented sequence; omega segments that are followed by
/// further segments must declare their (rational) limit term.
struct Segment {
    std::shared_ptr<StepStream> steps;
    std::optional<Term> limit;

    bool finite() const { return steps->finite(); }
};

/// A rewrite sequence of order type omega*k + m: k omega segments and m
/// finite steps, with continuation terms linking segment limits to the next
/// segment's source.
struct SegSeq {
    Term source;
    std::vector<Segment> segments;

    int omega_segments() const;
    long finite_step_count() const;
    bool finite() const;
    /// Order-type descriptor like "omega*2+3".
    std::string order_type() const;
};

struct Materialized {
    std::vector<RewriteStep> steps;
    Term end;         // term after the prefix, with declared limits substituted
    bool exhausted;   // no steps were skipped
    int skipped_above;  // when not exhausted, every skipped step is deeper than this
};

/// Validated prefix of the sequence containing every step at depth <= D.
/// Each materialized step is replayed and checked; omega limits are checked
/// against the computed prefix end to depth D.
Materialized materialize(const TRS& trs, const SegSeq& seq, int D);

/// Minimal step depth of the sequence (nullopt for the empty sequence);
/// sound for omega segments via their moduli.
std::optional<int> min_step_depth(const TRS& trs, const SegSeq& seq);

/// Count of steps at exactly `depth`; requires moduli for omega segments.
long count_steps_at_depth(const TRS& trs, const SegSeq& seq, int depth);

// ---- built-in generators for fixtures ----

/// Built-in omega generators addressable from sequence files:
///   a_unfold   on h(a) over {a->g(a), h(x)->k(x)}: unfolds a at depth j+1
///   or_unfold  on c with c->or(true,c): unfolds the cycle at depth j
///   sp_loop    on rec X = S(P(X)): contracts the root SP redex forever
///   r_loop     on r(x) with r(x)->r(x): contracts the root forever
std::shared_ptr<StepStream> builtin_stream(const std::string& name);
std::vector<std::string> builtin_stream_names();

/// Parse a sequence fixture file:
///   term: h(a)
///   steps: 1:au; 1.1:au
///   omega: gen=a_unfold
///   limit: h(rec X = g(X))
///   steps: eps:hk
/// `trs` supplies the signature for term literals.
SegSeq parse_sequence(std::string_view text, const TRS& trs);

}  // namespace wo
