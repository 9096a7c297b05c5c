#pragma once

#include <string>

#include "wo/trs.hpp"

// Shared fixture systems used across the test suites.
namespace fixtures {

inline wo::TRS sp() {
    return wo::parse_trs(
        "sig S/1 P/1\n"
        "rule PS : P(S(x)) -> x\n"
        "rule SP : S(P(x)) -> x\n");
}

inline wo::TRS sp_e_variant() {
    return wo::parse_trs(
        "sig S/1 P/1 e/1\n"
        "rule PS : P(S(x)) -> e(x)\n"
        "rule SP : S(P(x)) -> e(x)\n");
}

inline wo::TRS aaa() {
    return wo::parse_trs(
        "sig A/1\n"
        "rule AAA : A(A(A(x))) -> A(x)\n");
}

inline wo::TRS collapse_f() {
    return wo::parse_trs(
        "sig f/2 a/0 b/0\n"
        "rule K : f(x,y) -> x\n");
}

inline wo::TRS or_trs() {
    return wo::parse_trs(
        "sig or/2 true/0 false/0\n"
        "rule orl : or(true,x) -> true\n"
        "rule orr : or(x,true) -> true\n");
}

// or-TRS extended with a rule unfolding a constant forever.
inline wo::TRS or_unfold_trs() {
    return wo::parse_trs(
        "sig or/2 true/0 false/0 c/0\n"
        "rule orl : or(true,x) -> true\n"
        "rule orr : or(x,true) -> true\n"
        "rule cu  : c -> or(true,c)\n");
}

// The permuting/identity system with a Y-redex at the root.
inline wo::TRS example16() {
    return wo::parse_trs(
        "sig f/1 g/2 a/0\n"
        "rule r1 : f(g(x,y)) -> f(g(y,x))\n"
        "rule r2 : g(a,a) -> g(a,a)\n"
        "rule r3 : a -> a\n");
}

inline wo::TRS trivial_ga() {
    return wo::parse_trs(
        "sig g/2 a/0\n"
        "rule gg : g(a,a) -> g(a,a)\n"
        "rule aa : a -> a\n");
}

// Duplication + constant step, for residual copy tests.
inline wo::TRS dup_trs() {
    return wo::parse_trs(
        "sig d/1 c2/2 a/0 b/0\n"
        "rule dup : d(x) -> c2(x,x)\n"
        "rule ab  : a -> b\n");
}

// Compression fixture: an omega unfolding under h plus head steps.
inline wo::TRS compress_trs() {
    return wo::parse_trs(
        "sig a/0 g/1 h/1 k/1 k2/1\n"
        "rule au : a -> g(a)\n"
        "rule hk : h(x) -> k(x)\n"
        "rule kk2 : k(x) -> k2(x)\n");
}

// Divergence fixture: a root loop next to an unfolding constant.
inline wo::TRS divergent_trs() {
    return wo::parse_trs(
        "sig a/0 g/1 r/1\n"
        "rule au : a -> g(a)\n"
        "rule rr : r(x) -> r(x)\n");
}

}  // namespace fixtures
