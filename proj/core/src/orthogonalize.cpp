#include "wo/orthogonalize.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace wo {

namespace {

void require_weakly_orthogonal(const TRS& trs) {
    auto v = is_weakly_orthogonal(trs);
    if (!v.weakly_orthogonal)
        throw input_error("orthogonalization requires a weakly orthogonal system" +
                          (v.witness ? "; non-trivial pair: " + to_string(*v.witness) : ""));
}

// Topmost-leftmost selection order.
bool before(const Redex& a, const Redex& b) {
    if (a.pos.depth() != b.pos.depth()) return a.pos.depth() < b.pos.depth();
    if (!(a.pos == b.pos)) return a.pos < b.pos;
    return a.rule < b.rule;
}

void erase_redex(std::vector<Redex>& v, const Redex& r) {
    v.erase(std::remove(v.begin(), v.end(), r), v.end());
}

void insert_redex(std::vector<Redex>& v, const Redex& r) {
    if (std::find(v.begin(), v.end(), r) == v.end()) v.push_back(r);
}

}  // namespace

// ---------------------------------------------------------------------------
// Parallel steps
// ---------------------------------------------------------------------------

std::pair<ParallelStep, ParallelStep> orthogonalize_parallel(const TRS& trs,
                                                             const ParallelStep& alpha,
                                                             const ParallelStep& beta) {
    require_weakly_orthogonal(trs);
    if (!eq_rational(alpha.source, beta.source))
        throw input_error("orthogonalize_parallel: steps are not co-initial");

    if (alpha.redexes.periodic() || beta.redexes.periodic()) {
        // Periodic parallel steps pass through only when conflict-free; the
        // structural check already guarantees disjointness inside each step,
        // so cross-conflicts between marked nodes remain to be excluded.
        auto a = denote(trs, alpha.source, alpha.redexes, 2 * trs.max_pattern_depth() + 2);
        auto b = denote(trs, beta.source, beta.redexes, 2 * trs.max_pattern_depth() + 2);
        for (const Redex& x : a)
            for (const Redex& y : b)
                if (!(x == y) && overlap(trs, x, y))
                    throw input_error(
                        "orthogonalize_parallel: conflicts between periodic steps are not "
                        "representable; materialize to a depth first");
        return {alpha, beta};
    }

    std::vector<Redex> a = alpha.redexes.explicit_redexes;
    std::vector<Redex> b = beta.redexes.explicit_redexes;
    Term a_target = target(trs, alpha);
    Term b_target = target(trs, beta);

    for (;;) {
        // Collect the current cross-conflicts.
        struct Conflict {
            Redex mine, other;
            bool mine_in_a;
        };
        std::vector<Conflict> conflicts;
        for (const Redex& x : a)
            for (const Redex& y : b)
                if (!(x == y) && overlap(trs, x, y)) {
                    conflicts.push_back({x, y, true});
                    conflicts.push_back({y, x, false});
                }
        if (conflicts.empty()) break;

        // The topmost-leftmost conflicted redex; prefer the first step on ties.
        std::sort(conflicts.begin(), conflicts.end(), [](const Conflict& l, const Conflict& r) {
            if (!(l.mine == r.mine)) return before(l.mine, r.mine);
            if (l.mine_in_a != r.mine_in_a) return l.mine_in_a;
            return before(l.other, r.other);
        });
        const Redex picked = conflicts.front().mine;
        const bool picked_in_a = conflicts.front().mine_in_a;
        std::vector<Redex>& own = picked_in_a ? a : b;
        std::vector<Redex>& other = picked_in_a ? b : a;

        // Partners of the picked redex on the other side.
        std::vector<Redex> partners;
        for (const Redex& y : other)
            if (!(y == picked) && overlap(trs, picked, y)) partners.push_back(y);
        std::sort(partners.begin(), partners.end(), before);

        // Same position, different rules: the beta redex yields to the alpha
        // one regardless of which side was picked.
        auto same_pos = std::find_if(partners.begin(), partners.end(),
                                     [&](const Redex& y) { return y.pos == picked.pos; });
        if (same_pos != partners.end()) {
            const Redex in_a = picked_in_a ? picked : *same_pos;
            const Redex in_b = picked_in_a ? *same_pos : picked;
            erase_redex(b, in_b);
            insert_redex(b, in_a);
            continue;
        }

        // All partners are strictly below the picked redex (it is topmost):
        // replace the outermost redex by the top-leftmost inner one.
        const Redex inner = partners.front();
        erase_redex(own, picked);
        insert_redex(own, inner);
    }

    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ParallelStep a2 = ParallelStep::make(trs, alpha.source, a);
    ParallelStep b2 = ParallelStep::make(trs, beta.source, b);

    if (!eq_rational(target(trs, a2), a_target) || !eq_rational(target(trs, b2), b_target))
        throw property_violation("orthogonalize_parallel: a target was not preserved");
    for (const Redex& x : a2.redexes.explicit_redexes)
        for (const Redex& y : b2.redexes.explicit_redexes)
            if (!(x == y) && overlap(trs, x, y))
                throw property_violation("orthogonalize_parallel: conflicts remain");
    return {a2, b2};
}

// ---------------------------------------------------------------------------
// Y-redex elimination
// ---------------------------------------------------------------------------

Development drop_y_redexes(const TRS& trs, const Development& dev, const RedexSet& context) {
    require_weakly_orthogonal(trs);
    if (dev.redexes.periodic() || context.periodic())
        throw input_error("drop_y_redexes: periodic sets must be materialized first");
    const auto& ctx = context.explicit_redexes;
    for (const Redex& r : dev.redexes.explicit_redexes)
        if (std::find(ctx.begin(), ctx.end(), r) == ctx.end())
            throw input_error("drop_y_redexes: context must contain the development");

    auto rep = y_redexes(trs, ctx);
    std::set<Redex> dropped;
    for (size_t ix : rep.y_indices) dropped.insert(ctx[ix]);

    std::vector<Redex> kept;
    for (const Redex& r : dev.redexes.explicit_redexes)
        if (!dropped.count(r)) kept.push_back(r);
    return Development::make(trs, dev.source, kept);
}

// ---------------------------------------------------------------------------
// Developments: the top-down case loop
// ---------------------------------------------------------------------------

std::string OrthoTraceEntry::describe() const {
    std::string out;
    switch (kind) {
        case OrthoCase::ReplaceOnlyPartner:
            out = "(i) replace " + v.to_string() + " by " + u.to_string();
            break;
        case OrthoCase::DropDisjointPair:
            out = "(ii) drop Y-redexes " + u.to_string() + ", " + v.to_string() + ", " +
                  w->to_string();
            break;
        case OrthoCase::ReplaceByOuter:
            out = "(iii) replace " + u.to_string() + " by " + v.to_string();
            break;
        case OrthoCase::DropFourYRedexes:
            out = "(iv) drop Y-redexes " + u.to_string() + ", " + m->to_string() + ", " +
                  v.to_string() + ", " + w->to_string();
            break;
    }
    return out + " [conflict depth " + std::to_string(conflict_depth) + "]";
}

OrthoResult orthogonalize_developments(const TRS& trs, const Development& u_dev,
                                       const Development& v_dev, int d) {
    require_weakly_orthogonal(trs);
    if (d < 0) throw input_error("orthogonalize_developments: negative budget");
    if (!eq_rational(u_dev.source, v_dev.source))
        throw input_error("orthogonalize_developments: developments are not co-initial");
    const Term& t = u_dev.source;

    // Materialize periodic parts far enough that every conflict resolvable
    // above the budget is visible together with its partners, and one more
    // pattern depth so a residual frontier at depth >= d is seen and
    // reported. Marks resolve against their own development's source graph.
    int mat_depth = d + 2 * trs.max_pattern_depth();
    std::vector<Redex> U = denote(trs, u_dev.source, u_dev.redexes, mat_depth);
    std::vector<Redex> V = denote(trs, v_dev.source, v_dev.redexes, mat_depth);

    Term u_target_before = develop(trs, u_dev.source, u_dev.redexes, d);
    Term v_target_before = develop(trs, v_dev.source, v_dev.redexes, d);

    OrthoResult result;
    int last_frontier = -1;

    for (;;) {
        // Cross-conflicts: non-identical overlapping pairs.
        struct Pair {
            Redex u, v;
        };
        std::vector<Pair> conflicts;
        for (const Redex& x : U)
            for (const Redex& y : V)
                if (!(x == y) && overlap(trs, x, y)) conflicts.push_back({x, y});
        if (conflicts.empty()) break;

        int frontier = std::numeric_limits<int>::max();
        for (const Pair& c : conflicts)
            frontier = std::min(frontier, std::min(c.u.pos.depth(), c.v.pos.depth()));
        if (frontier >= d) {
            result.budget_exhausted = true;
            result.frontier_depth = frontier;
            break;
        }
        if (frontier < last_frontier)
            throw property_violation("orthogonalize_developments: conflict frontier moved up");
        last_frontier = frontier;

        // Topmost conflicted redex; leftmost, then U before V on exact ties.
        std::optional<Redex> picked;
        bool picked_in_u = true;
        auto consider = [&](const Redex& r, bool in_u) {
            if (!picked || before(r, *picked) || (r == *picked && in_u && !picked_in_u)) {
                picked = r;
                picked_in_u = in_u;
            }
        };
        for (const Pair& c : conflicts) {
            consider(c.u, true);
            consider(c.v, false);
        }
        Redex u = *picked;
        std::vector<Redex>& own = picked_in_u ? U : V;
        std::vector<Redex>& other = picked_in_u ? V : U;

        // Topmost partner v of u in the other set.
        std::vector<Redex> partners;
        for (const Redex& y : other)
            if (!(y == u) && overlap(trs, u, y)) partners.push_back(y);
        std::sort(partners.begin(), partners.end(), before);
        Redex v = partners.front();

        OrthoTraceEntry entry;
        entry.u = u;
        entry.v = v;
        entry.conflict_depth = frontier;

        if (partners.size() == 1) {
            // (i) the only partner is replaced by u.
            entry.kind = OrthoCase::ReplaceOnlyPartner;
            erase_redex(other, v);
            insert_redex(other, u);
        } else {
            Redex w = partners[1];
            entry.w = w;
            if (v.pos.disjoint_from(w.pos)) {
                // (ii) u, v, w are Y-redexes and can be dropped.
                entry.kind = OrthoCase::DropDisjointPair;
                erase_redex(own, u);
                erase_redex(other, v);
                erase_redex(other, w);
            } else {
                if (!v.pos.is_prefix_of(w.pos))
                    throw property_violation(
                        "orthogonalize_developments: second partner not nested in the first");
                std::vector<Redex> on_v;
                for (const Redex& x : own)
                    if (!(x == v) && overlap(trs, x, v)) on_v.push_back(x);
                std::sort(on_v.begin(), on_v.end(), before);
                if (on_v.size() == 1) {
                    // (iii) u is the only redex of its side overlapping v.
                    entry.kind = OrthoCase::ReplaceByOuter;
                    erase_redex(own, u);
                    insert_redex(own, v);
                } else {
                    // (iv) a second redex m of u's side overlaps v; then w and
                    // m are at disjoint positions and all four are Y-redexes.
                    Redex m = on_v[0] == u ? on_v[1] : on_v[0];
                    entry.m = m;
                    entry.kind = OrthoCase::DropFourYRedexes;
                    if (!w.pos.disjoint_from(m.pos))
                        throw property_violation(
                            "orthogonalize_developments: case (iv) redexes w and m not disjoint");
                    erase_redex(own, u);
                    erase_redex(own, m);
                    erase_redex(other, v);
                    erase_redex(other, w);
                }
            }
        }
        result.trace.push_back(std::move(entry));
    }

    std::sort(U.begin(), U.end());
    std::sort(V.begin(), V.end());
    result.u_dev = Development::make(trs, t, U);
    result.v_dev = Development::make(trs, t, V);

    if (!eq_to_depth(develop(trs, t, result.u_dev.redexes, d), u_target_before, d) ||
        !eq_to_depth(develop(trs, t, result.v_dev.redexes, d), v_target_before, d))
        throw property_violation("orthogonalize_developments: a target changed above the budget");
    return result;
}

}  // namespace wo
