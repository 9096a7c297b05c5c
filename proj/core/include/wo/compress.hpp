#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wo/sequence.hpp"

namespace wo {

struct CompressionReport {
    std::string input_order_type;
    int omega_segments_in = 0;
    long finite_steps_in = 0;

    int min_depth = 0;                 // minimal step depth of the input
    long steps_at_min_depth_in = 0;    // counted via the moduli
    long steps_at_min_depth_out = 0;   // preserved by the construction
    int limit_agreement_depth = 0;     // depth at which the limits were compared

    bool output_finite = false;
    std::optional<long> output_length;  // when the output is finite
    SegSeq output;                      // single-segment sequence of length <= omega
};

/// Compression of a strongly convergent sequence of order type omega*k + m
/// to length <= omega: trailing steps are pulled before the tail of the
/// preceding omega segment at the modulus of (hole depth + pattern depth),
/// with the per-variable reductions interleaved by anti-diagonal dovetailing;
/// omega*omega joints are flattened level by level, splitting at the last
/// step of the current depth and continuing one deeper.
///
/// The source term, the minimal step depth, and the number of steps at that
/// depth are preserved; the output limit agrees with the input limit to
/// depth d_check (verified).
CompressionReport compress(const TRS& trs, const SegSeq& seq, int d_check);

struct DivergentPrefix {
    std::vector<RewriteStep> steps;    // validated prefix of the <= omega output
    int witness_depth = 0;
    long steps_at_witness_depth = 0;
    /// Input steps consumed per produced depth-d step, observed for this run.
    double consumption_ratio = 0.0;
};

/// Compression of a divergent sequence: the final segment may
/// lack a modulus; `witness_depth` is a depth at which infinitely many steps
/// occur. Produces the first K steps of a single <= omega divergent sequence
/// from the same source, repeatedly pulling the next witness-depth step
/// forward. Every emitted prefix is replay-validated.
DivergentPrefix compress_divergent(const TRS& trs, const SegSeq& seq, long K, int witness_depth);

}  // namespace wo
