#include <doctest.h>

#include "fixtures.hpp"
#include "wo/compress.hpp"

using namespace wo;

namespace {

// The omega+1 fixture: h(a) ->^omega h(g^omega) -> k(g^omega).
SegSeq omega_plus_one(const TRS& trs) {
    SegSeq seq;
    seq.source = parse_term("h(a)", trs.sig);
    seq.segments.push_back(
        Segment{builtin_stream("a_unfold"), parse_term("h(rec X = g(X))", trs.sig)});
    seq.segments.push_back(Segment{finite_steps({{Position{}, "hk"}}), std::nullopt});
    return seq;
}

}  // namespace

TEST_CASE("compress: omega+1 pulls the head step forward") {
    TRS trs = fixtures::compress_trs();
    SegSeq seq = omega_plus_one(trs);
    CHECK(seq.order_type() == "ω+1");

    CompressionReport rep = compress(trs, seq, 20);
    CHECK(rep.input_order_type == "ω+1");
    CHECK(rep.omega_segments_in == 1);
    CHECK(rep.finite_steps_in == 1);
    CHECK(rep.min_depth == 0);
    CHECK(rep.steps_at_min_depth_in == 1);
    CHECK(rep.steps_at_min_depth_out == 1);
    CHECK(!rep.output_finite);
    CHECK(rep.limit_agreement_depth == 20);

    // Replay oracle: both sequences reach k(g^omega) to depth 20.
    Materialized out = materialize(trs, rep.output, 20);
    CHECK(eq_to_depth(out.end, parse_term("k(rec X = g(X))", trs.sig), 20));
    // The head step now occurs at a finite index.
    bool saw_head = false;
    for (const RewriteStep& st : out.steps)
        if (st.redex.rule == "hk") saw_head = true;
    CHECK(saw_head);
}

TEST_CASE("compress: omega+2 pulls both trailing steps") {
    TRS trs = fixtures::compress_trs();
    SegSeq seq = omega_plus_one(trs);
    seq.segments.push_back(Segment{finite_steps({{Position{}, "kk2"}}), std::nullopt});
    CHECK(seq.order_type() == "ω+2");

    CompressionReport rep = compress(trs, seq, 20);
    CHECK(rep.min_depth == 0);
    CHECK(rep.steps_at_min_depth_in == 2);
    CHECK(rep.steps_at_min_depth_out == 2);
    CHECK(!rep.output_finite);
    Materialized out = materialize(trs, rep.output, 20);
    CHECK(eq_to_depth(out.end, parse_term("k2(rec X = g(X))", trs.sig), 20));
}

TEST_CASE("compress: already-finite input returned unchanged") {
    TRS sp = fixtures::sp();
    SegSeq seq;
    seq.source = parse_term("S(P(S(P(x))))", sp.sig);
    seq.segments.push_back(
        Segment{finite_steps({{Position{1, 1}, "SP"}, {Position{}, "SP"}}), std::nullopt});
    CompressionReport rep = compress(sp, seq, 10);
    CHECK(rep.output_finite);
    CHECK(rep.output_length == 2);
    CHECK(rep.steps_at_min_depth_in == rep.steps_at_min_depth_out);
    Materialized out = materialize(sp, rep.output, 10);
    CHECK(eq_rational(out.end, Term::var("x")));
}

TEST_CASE("compress: omega*2 is flattened level by level") {
    TRS trs = parse_trs(
        "sig a/0 g/1 f2/2\n"
        "rule au : a -> g(a)\n");
    SegSeq seq;
    seq.source = parse_term("f2(a,a)", trs.sig);
    // First unfold the left argument, then the right one.
    seq.segments.push_back(Segment{
        omega_steps(
            [](long j) {
                Position p{1};
                for (long k = 0; k < j; ++k) p.path.push_back(1);
                return StepDesc{p, "au"};
            },
            [](int d) { return static_cast<long>(d); }),
        parse_term("f2(rec X = g(X), a)", trs.sig)});
    seq.segments.push_back(Segment{
        omega_steps(
            [](long j) {
                Position p{2};
                for (long k = 0; k < j; ++k) p.path.push_back(1);
                return StepDesc{p, "au"};
            },
            [](int d) { return static_cast<long>(d); }),
        parse_term("f2(rec X = g(X), rec Y = g(Y))", trs.sig)});
    CHECK(seq.order_type() == "ω*2");

    CompressionReport rep = compress(trs, seq, 12);
    CHECK(!rep.output_finite);
    CHECK(rep.min_depth == 1);
    CHECK(rep.steps_at_min_depth_in == 2);
    CHECK(rep.steps_at_min_depth_out == 2);
    Materialized out = materialize(trs, rep.output, 12);
    CHECK(eq_to_depth(out.end, parse_term("f2(rec X = g(X), rec Y = g(Y))", trs.sig), 12));
}

TEST_CASE("compress: erasing pull can leave a finite sequence behind") {
    TRS trs = fixtures::or_unfold_trs();
    SegSeq seq;
    seq.source = parse_term("or(c,true)", trs.sig);
    seq.segments.push_back(Segment{
        omega_steps(
            [](long j) {
                Position p{1};
                for (long k = 0; k < j; ++k) p.path.push_back(2);
                return StepDesc{p, "cu"};
            },
            [](int d) { return static_cast<long>(d) + 1; }),
        parse_term("or(rec X = or(true,X), true)", trs.sig)});
    seq.segments.push_back(Segment{finite_steps({{Position{}, "orr"}}), std::nullopt});

    CompressionReport rep = compress(trs, seq, 10);
    // The pulled step erases the unfolding; the output limit is true.
    Materialized out = materialize(trs, rep.output, 10);
    CHECK(eq_to_depth(out.end, Term::constant("true"), 10));
    CHECK(rep.steps_at_min_depth_in == 1);
    CHECK(rep.steps_at_min_depth_out == 1);
}

TEST_CASE("compress: dovetail fairness, limits agree at increasing depths") {
    // Every per-variable reduction is eventually exhausted to any depth: the
    // output limit keeps agreeing with the input limit as the check depth
    // grows (compress verifies the agreement internally and would throw).
    TRS trs = fixtures::compress_trs();
    SegSeq seq = omega_plus_one(trs);
    for (int d : {4, 10, 16, 24}) {
        CompressionReport rep = compress(trs, seq, d);
        CHECK(rep.limit_agreement_depth == d);
    }
}

TEST_CASE("compress rejects non-left-linear systems") {
    TRS nl = parse_trs("sig f/2 a/0\nrule r : f(x,x) -> x\n");
    SegSeq seq;
    seq.source = parse_term("f(a,a)", nl.sig);
    seq.segments.push_back(Segment{finite_steps({}), std::nullopt});
    CHECK_THROWS_AS(compress(nl, seq, 5), input_error);
}

TEST_CASE("compress: modulus of the output is monotone and sound") {
    TRS trs = fixtures::compress_trs();
    SegSeq seq = omega_plus_one(trs);
    CompressionReport rep = compress(trs, seq, 16);
    const auto& stream = rep.output.segments.front().steps;
    long prev = 0;
    for (int depth = 0; depth <= 12; ++depth) {
        long m = stream->modulus(depth);
        CHECK(m >= prev);
        prev = m;
        // Soundness: every step at index >= m is deeper than `depth`.
        for (long i = m; i < m + 8; ++i) CHECK(stream->step(i).pos.depth() > depth);
    }
}

TEST_CASE("compress_divergent: root loop beside an unfolding") {
    TRS trs = fixtures::divergent_trs();
    SegSeq seq;
    seq.source = parse_term("r(a)", trs.sig);
    // omega segment: one root loop step, then ever-deeper unfolding.
    seq.segments.push_back(Segment{
        omega_steps(
            [](long j) {
                if (j == 0) return StepDesc{Position{}, "rr"};
                Position p{1};
                for (long k = 1; k < j; ++k) p.path.push_back(1);
                return StepDesc{p, "au"};
            },
            [](int d) { return static_cast<long>(d) + 1; }),
        parse_term("r(rec X = g(X))", trs.sig)});
    // divergent tail: the root loops forever on the limit.
    seq.segments.push_back(Segment{builtin_stream("r_loop"), std::nullopt});

    DivergentPrefix out = compress_divergent(trs, seq, 30, 0);
    REQUIRE(out.steps.size() == 30);
    CHECK(out.steps_at_witness_depth >= 10);
    // The prefix is a genuine rewrite sequence from the source.
    CHECK(eq_rational(out.steps.front().source, seq.source));
    for (size_t i = 0; i + 1 < out.steps.size(); ++i)
        CHECK(eq_rational(out.steps[i].target, out.steps[i + 1].source));
}

TEST_CASE("compress_divergent: an omega sequence with infinitely many root steps") {
    TRS sp = fixtures::sp();
    SegSeq seq;
    seq.source = parse_term("rec X = S(P(X))", sp.sig);
    seq.segments.push_back(Segment{builtin_stream("sp_loop"), std::nullopt});
    DivergentPrefix out = compress_divergent(sp, seq, 12, 0);
    REQUIRE(out.steps.size() == 12);
    CHECK(out.steps_at_witness_depth == 12);  // the prefix is sigma's own prefix
    for (const RewriteStep& st : out.steps) CHECK(st.redex.pos == Position{});
}
