#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "wo/orthogonalize.hpp"

using namespace wo;

namespace {

// Seeded random co-initial development pair on a term: greedily pick two
// independent non-overlapping subsets of the redexes.
std::pair<Development, Development> random_dev_pair(const TRS& trs, const Term& t, int depth,
                                                    std::mt19937_64& rng) {
    auto rs = find_redexes(trs, t, depth);
    auto pick = [&] {
        std::vector<Redex> shuffled = rs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::vector<Redex> subset;
        for (const Redex& r : shuffled) {
            if (rng() % 2) continue;
            bool ok = true;
            for (const Redex& s : subset)
                if (overlap(trs, s, r)) ok = false;
            if (ok) subset.push_back(r);
        }
        return Development::make(trs, t, subset);
    };
    return {pick(), pick()};
}

bool no_cross_conflict(const TRS& trs, const Development& u, const Development& v) {
    for (const Redex& x : u.redexes.explicit_redexes)
        for (const Redex& y : v.redexes.explicit_redexes)
            if (!(x == y) && overlap(trs, x, y)) return false;
    return true;
}

}  // namespace

TEST_CASE("orthogonalize_parallel: outermost yields to innermost") {
    TRS sp = fixtures::sp();
    Term s = parse_term("S(P(S(P(x))))", sp.sig);
    ParallelStep alpha = ParallelStep::make(sp, s, std::vector<Redex>{{Position{}, "SP"}});
    ParallelStep beta = ParallelStep::make(sp, s, std::vector<Redex>{{Position{1}, "PS"}});
    auto [a2, b2] = orthogonalize_parallel(sp, alpha, beta);
    REQUIRE(a2.redexes.explicit_redexes.size() == 1);
    CHECK(a2.redexes.explicit_redexes[0] == Redex{Position{1}, "PS"});
    CHECK(b2.redexes.explicit_redexes[0] == Redex{Position{1}, "PS"});
    Term expected = parse_term("S(P(x))", sp.sig);
    CHECK(eq_rational(target(sp, a2), expected));
    CHECK(eq_rational(target(sp, b2), expected));
}

TEST_CASE("orthogonalize_parallel: identical redexes are not conflicts") {
    TRS sp = fixtures::sp();
    Term s = parse_term("S(P(x))", sp.sig);
    ParallelStep alpha = ParallelStep::make(sp, s, std::vector<Redex>{{Position{}, "SP"}});
    auto [a2, b2] = orthogonalize_parallel(sp, alpha, alpha);
    CHECK(a2.redexes.explicit_redexes == alpha.redexes.explicit_redexes);
    CHECK(b2.redexes.explicit_redexes == alpha.redexes.explicit_redexes);
}

TEST_CASE("orthogonalize_parallel: same position, different rules") {
    TRS ex = parse_trs(
        "sig f/1 g/2 a/0\n"
        "rule r1 : f(g(x,y)) -> f(g(y,x))\n"
        "rule r2 : g(a,a) -> g(a,a)\n"
        "rule r2b : g(a,a) -> g(a,a)\n"
        "rule r3 : a -> a\n");
    Term t = parse_term("f(g(a,a))", ex.sig);
    ParallelStep alpha = ParallelStep::make(ex, t, std::vector<Redex>{{Position{1}, "r2"}});
    ParallelStep beta = ParallelStep::make(ex, t, std::vector<Redex>{{Position{1}, "r2b"}});
    auto [a2, b2] = orthogonalize_parallel(ex, alpha, beta);
    CHECK(a2.redexes.explicit_redexes[0] == Redex{Position{1}, "r2"});
    CHECK(b2.redexes.explicit_redexes[0] == Redex{Position{1}, "r2"});  // beta yields to alpha
    CHECK(eq_rational(target(ex, b2), t));
}

TEST_CASE("orthogonalize_parallel rejects non-weakly-orthogonal systems") {
    TRS bad = fixtures::sp_e_variant();
    Term s = parse_term("S(P(x))", bad.sig);
    ParallelStep alpha = ParallelStep::make(bad, s, std::vector<Redex>{{Position{}, "SP"}});
    CHECK_THROWS_AS(orthogonalize_parallel(bad, alpha, alpha), input_error);
}

TEST_CASE("drop_y_redexes: the permuting example") {
    TRS ex = fixtures::example16();
    Term t = parse_term("f(g(a,a))", ex.sig);
    std::vector<Redex> all = {{Position{}, "r1"},
                              {Position{1}, "r2"},
                              {Position{1, 1}, "r3"},
                              {Position{1, 2}, "r3"}};
    Development dev = Development::make(ex, t, std::vector<Redex>{{Position{}, "r1"}});
    Development dropped = drop_y_redexes(ex, dev, RedexSet::of(all));
    CHECK(dropped.redexes.empty());
    CHECK(eq_rational(develop(ex, dropped, 8), develop(ex, dev, 8)));
    CHECK(eq_rational(develop(ex, dev, 8), t));
}

TEST_CASE("drop_y_redexes: no Y-redexes means unchanged") {
    TRS sp = fixtures::sp();
    Term t = parse_term("S(P(S(P(x))))", sp.sig);
    Development dev = Development::make(sp, t, std::vector<Redex>{{Position{}, "SP"}});
    RedexSet ctx = RedexSet::of({{Position{}, "SP"}, {Position{1, 1}, "SP"}});
    Development kept = drop_y_redexes(sp, dev, ctx);
    CHECK(kept.redexes.explicit_redexes == dev.redexes.explicit_redexes);
}

TEST_CASE("drop_y_redexes: trivial-rule fixture with a disjoint pair") {
    TRS ga = fixtures::trivial_ga();
    Term t = parse_term("g(a,a)", ga.sig);
    std::vector<Redex> all = {{Position{}, "gg"}, {Position{1}, "aa"}, {Position{2}, "aa"}};
    Development dev = Development::make(ga, t, std::vector<Redex>{{Position{}, "gg"}});
    Development dropped = drop_y_redexes(ga, dev, RedexSet::of(all));
    CHECK(dropped.redexes.empty());  // v1 = @1 and v2 = @2 are disjoint
    CHECK(eq_rational(develop(ga, dropped, 8), develop(ga, dev, 8)));
}

TEST_CASE("orthogonalize_developments: chain configuration resolves top-down") {
    // A five-redex chain configuration: 1 and 2 in one
    // development, 3 and 5 in the other along a chain (1~3, 2~3, 2~5), plus
    // an unrelated redex 4 on a second branch.
    TRS trs = parse_trs(
        "sig S/1 P/1 pair/2\n"
        "rule PS : P(S(x)) -> x\n"
        "rule SP : S(P(x)) -> x\n");
    Term t = parse_term("pair(S(P(S(P(S(P(x)))))), S(P(y)))", trs.sig);
    Development U = Development::make(
        trs, t,
        std::vector<Redex>{{Position{1}, "SP"}, {Position{1, 1, 1}, "SP"}, {Position{2}, "SP"}});
    Development V = Development::make(
        trs, t, std::vector<Redex>{{Position{1, 1}, "PS"}, {Position{1, 1, 1, 1}, "PS"}});
    Term u_target = develop(trs, U, 12);
    Term v_target = develop(trs, V, 12);

    auto res = orthogonalize_developments(trs, U, V, 12);
    CHECK(!res.budget_exhausted);
    CHECK(no_cross_conflict(trs, res.u_dev, res.v_dev));
    CHECK(eq_rational(develop(trs, res.u_dev, 12), u_target));
    CHECK(eq_rational(develop(trs, res.v_dev, 12), v_target));
    REQUIRE(res.trace.size() == 2);
    CHECK(res.trace[0].kind == OrthoCase::ReplaceOnlyPartner);
    CHECK(res.trace[1].kind == OrthoCase::ReplaceOnlyPartner);
}

TEST_CASE("orthogonalize_developments: already orthogonal pair returned unchanged") {
    TRS sp = fixtures::sp();
    Term t = parse_term("S(P(S(P(x))))", sp.sig);
    Development U = Development::make(sp, t, std::vector<Redex>{{Position{}, "SP"}});
    Development V = Development::make(sp, t, std::vector<Redex>{{Position{1, 1}, "SP"}});
    auto res = orthogonalize_developments(sp, U, V, 10);
    CHECK(!res.budget_exhausted);
    CHECK(res.trace.empty());
    CHECK(res.u_dev.redexes.explicit_redexes == U.redexes.explicit_redexes);
    CHECK(res.v_dev.redexes.explicit_redexes == V.redexes.explicit_redexes);
}

TEST_CASE("orthogonalize_developments: blue/green on A^omega exhausts the budget") {
    TRS aaa = fixtures::aaa();
    // Unroll the cycle to period 3 so blue marks positions 0,3,6,... and to
    // phase-shift the green set one step down.
    Term a3 = parse_term("rec X = A(A(A(X)))", aaa.sig);
    RedexSet blue;
    blue.marks.push_back(PeriodicMark{*a3.node_by_name("X"), "AAA"});
    Term a3g = parse_term("A(rec Y = A(A(A(Y))))", aaa.sig);
    CHECK(eq_rational(a3, a3g));
    RedexSet green;
    green.marks.push_back(PeriodicMark{*a3g.node_by_name("Y"), "AAA"});
    // Denotations live on the same unfolding, so transfer green to a3's graph:
    // occurrences of Y in A(rec Y) are 1,4,7,...; on a3 the same positions.
    Development U = Development::make(aaa, a3, blue);
    Development V_src = Development::make(aaa, a3g, green);

    const int d = 12;
    auto green_explicit = denote(aaa, a3g, green, d + aaa.max_pattern_depth());
    Development V = Development::make(aaa, a3, green_explicit);

    auto res = orthogonalize_developments(aaa, U, V, d);
    CHECK(res.budget_exhausted);
    REQUIRE(res.frontier_depth.has_value());
    CHECK(*res.frontier_depth >= d);
    // Every blue-green pair along the spine conflicts; above the budget the
    // pair is conflict-free.
    for (const Redex& x : res.u_dev.redexes.explicit_redexes)
        for (const Redex& y : res.v_dev.redexes.explicit_redexes)
            if (!(x == y) && overlap(aaa, x, y))
                CHECK(std::min(x.pos.depth(), y.pos.depth()) >= d);
    // Both developments still land on A^omega to depth d.
    CHECK(eq_to_depth(develop(aaa, res.u_dev, d), a3, d));
    CHECK(eq_to_depth(develop(aaa, res.v_dev, d), a3, d));
    // The frontier never moved up during the run.
    int last = -1;
    for (const auto& entry : res.trace) {
        CHECK(entry.conflict_depth >= last);
        last = entry.conflict_depth;
    }
    CHECK(!res.trace.empty());
}

TEST_CASE("orthogonalize_developments: 200 seeded random pairs per fixture") {
    std::mt19937_64 rng(0xC0FFEE);
    const int d = 12;
    for (const TRS& trs : {fixtures::sp(), fixtures::aaa(), fixtures::example16()}) {
        std::vector<Term> terms;
        if (trs.find_rule("SP"))
            terms = {parse_term("S(P(S(P(S(P(x))))))", trs.sig),
                     parse_term("P(S(P(S(x))))", trs.sig),
                     parse_term("rec X = S(P(X))", trs.sig)};
        else if (trs.find_rule("AAA"))
            terms = {parse_term("A(A(A(A(A(A(x))))))", trs.sig),
                     parse_term("rec X = A(X)", trs.sig)};
        else
            terms = {parse_term("f(g(a,a))", trs.sig)};
        for (int round = 0; round < 200; ++round) {
            const Term& t = terms[static_cast<size_t>(rng() % terms.size())];
            auto [U, V] = random_dev_pair(trs, t, 6, rng);
            Term ut = develop(trs, U, d);
            Term vt = develop(trs, V, d);
            auto res = orthogonalize_developments(trs, U, V, d);
            CHECK(eq_to_depth(develop(trs, res.u_dev, d), ut, d));
            CHECK(eq_to_depth(develop(trs, res.v_dev, d), vt, d));
            if (!res.budget_exhausted) CHECK(no_cross_conflict(trs, res.u_dev, res.v_dev));
            int last = -1;
            for (const auto& entry : res.trace) {
                CHECK(entry.conflict_depth >= last);
                last = entry.conflict_depth;
            }
        }
    }
}
