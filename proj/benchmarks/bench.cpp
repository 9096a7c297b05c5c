#include <benchmark/benchmark.h>

#include "wo/compress.hpp"
#include "wo/project.hpp"
#include "wo/sp.hpp"

using namespace wo;

namespace {

TRS sp_system() {
    return parse_trs(
        "sig S/1 P/1\n"
        "rule PS : P(S(x)) -> x\n"
        "rule SP : S(P(x)) -> x\n");
}

Term sp_word(int len) {
    // Alternating from the root: S P S P ...
    Term t = Term::var("x");
    for (int i = len - 1; i >= 0; --i) t = Term::fun(i % 2 ? "P" : "S", {t});
    return t;
}

}  // namespace

static void BM_eq_rational(benchmark::State& state) {
    Signature sig;
    sig.declare("S", 1);
    Term a = parse_term("rec X = S(X)", sig);
    std::string expr = "rec Y = S(";
    for (long i = 0; i < state.range(0); ++i) expr += "S(";
    expr += "Y";
    for (long i = 0; i <= state.range(0); ++i) expr += ")";
    Term b = parse_term(expr, sig);
    for (auto _ : state) benchmark::DoNotOptimize(eq_rational(a, b));
}
BENCHMARK(BM_eq_rational)->Arg(4)->Arg(16)->Arg(64);

static void BM_find_redexes(benchmark::State& state) {
    TRS sp = sp_system();
    Term t = sp_word(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(find_redexes(sp, t, static_cast<int>(state.range(0))));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_find_redexes)->Range(8, 256)->Complexity();

static void BM_critical_pairs(benchmark::State& state) {
    TRS sp = sp_system();
    for (auto _ : state) benchmark::DoNotOptimize(critical_pairs(sp));
}
BENCHMARK(BM_critical_pairs);

static void BM_classify_q(benchmark::State& state) {
    SPWord q = make_q();
    for (auto _ : state) benchmark::DoNotOptimize(classify(q));
}
BENCHMARK(BM_classify_q);

static void BM_reduce_toward(benchmark::State& state) {
    SPWord q = make_q();
    for (auto _ : state)
        benchmark::DoNotOptimize(reduce_toward(q, 'S', static_cast<int>(state.range(0))));
}
BENCHMARK(BM_reduce_toward)->Arg(5)->Arg(15)->Arg(25);

static void BM_develop_periodic(benchmark::State& state) {
    TRS aaa = parse_trs("sig A/1\nrule AAA : A(A(A(x))) -> A(x)\n");
    Term a3 = parse_term("rec X = A(A(A(X)))", aaa.sig);
    RedexSet blue;
    blue.marks.push_back(PeriodicMark{*a3.node_by_name("X"), "AAA"});
    Development dev = Development::make(aaa, a3, blue);
    for (auto _ : state)
        benchmark::DoNotOptimize(develop(aaa, dev, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_develop_periodic)->Arg(8)->Arg(16);

static void BM_wo_project(benchmark::State& state) {
    TRS sp = sp_system();
    Term t = sp_word(16);
    ParallelStep alpha = ParallelStep::make(sp, t, std::vector<Redex>{{Position{}, "SP"}});
    ParallelStep beta = ParallelStep::make(sp, t, std::vector<Redex>{{Position{1}, "PS"}});
    for (auto _ : state) benchmark::DoNotOptimize(wo_project(sp, alpha, beta));
}
BENCHMARK(BM_wo_project);

static void BM_compress_omega_plus_one(benchmark::State& state) {
    TRS trs = parse_trs(
        "sig a/0 g/1 h/1 k/1\n"
        "rule au : a -> g(a)\n"
        "rule hk : h(x) -> k(x)\n");
    SegSeq seq;
    seq.source = parse_term("h(a)", trs.sig);
    seq.segments.push_back(
        Segment{builtin_stream("a_unfold"), parse_term("h(rec X = g(X))", trs.sig)});
    seq.segments.push_back(Segment{finite_steps({{Position{}, "hk"}}), std::nullopt});
    for (auto _ : state)
        benchmark::DoNotOptimize(compress(trs, seq, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_compress_omega_plus_one)->Arg(8)->Arg(20);

BENCHMARK_MAIN();
