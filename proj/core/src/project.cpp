#include "wo/project.hpp"

#include <algorithm>
#include <limits>

namespace wo {

namespace {

void require_explicit(const ParallelStep& step, const char* what) {
    if (step.redexes.periodic())
        throw input_error(std::string(what) + ": periodic steps must be materialized first");
}

std::optional<int> min_depth(const std::vector<Redex>& rs) {
    std::optional<int> best;
    for (const Redex& r : rs)
        if (!best || r.pos.depth() < *best) best = r.pos.depth();
    return best;
}

std::optional<int> min_depth(const ParallelStep& step) {
    return min_depth(step.redexes.explicit_redexes);
}

// min(a, b) where absent means +infinity.
std::optional<int> opt_min(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

bool at_least(std::optional<int> value, std::optional<int> bound) {
    if (!bound) return !value.has_value();  // bound +inf: only the empty step qualifies
    return !value || *value >= *bound;
}

std::optional<int> plus1(std::optional<int> v) {
    return v ? std::optional<int>(*v + 1) : std::nullopt;
}

// Residuals of explicit redexes after the complete development of `over`.
std::vector<Redex> residuals_after(const TRS& trs, const Term& source,
                                   const std::vector<Redex>& tracked,
                                   const std::vector<Redex>& over) {
    std::vector<Redex> live;
    for (const Redex& r : tracked)
        if (std::find(over.begin(), over.end(), r) == over.end()) live.push_back(r);

    auto steps = develop_steps(trs, source, over);
    std::vector<Redex> cur = live;
    for (const RewriteStep& st : steps) {
        std::vector<Redex> next;
        for (const Redex& r : cur)
            for (const Position& p : trace_position(trs, st, r.pos))
                next.push_back(Redex{p, r.rule});
        cur = std::move(next);
    }
    Term end = steps.empty() ? source : steps.back().target;
    for (const Redex& r : cur)
        if (!is_redex(trs, end, r))
            throw property_violation("residuals_after: a traced occurrence is not a redex");
    std::sort(cur.begin(), cur.end());
    cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
    return cur;
}

void check_orthogonal_pair(const TRS& trs, const std::vector<Redex>& a,
                           const std::vector<Redex>& b, const char* what) {
    for (const Redex& x : a)
        for (const Redex& y : b)
            if (!(x == y) && overlap(trs, x, y))
                throw input_error(std::string(what) + ": " + x.to_string() + " overlaps " +
                                  y.to_string() + "; orthogonalize first");
}

ParallelStep singleton_step(const TRS& trs, const RewriteStep& st) {
    return ParallelStep::make(trs, st.source, std::vector<Redex>{st.redex});
}

}  // namespace

// ---------------------------------------------------------------------------
// Residual projection
// ---------------------------------------------------------------------------

ParallelStep project_orthogonal(const TRS& trs, const ParallelStep& alpha,
                                const ParallelStep& beta) {
    require_explicit(alpha, "project_orthogonal");
    require_explicit(beta, "project_orthogonal");
    if (!eq_rational(alpha.source, beta.source))
        throw input_error("project_orthogonal: steps are not co-initial");
    const auto& a = alpha.redexes.explicit_redexes;
    const auto& b = beta.redexes.explicit_redexes;
    check_orthogonal_pair(trs, a, b, "project_orthogonal");

    std::vector<Redex> res = residuals_after(trs, alpha.source, a, b);
    Term end = target(trs, beta);
    return ParallelStep::make(trs, end, std::move(res));
}

ParallelStep wo_project(const TRS& trs, const ParallelStep& alpha, const ParallelStep& beta) {
    auto [a2, b2] = orthogonalize_parallel(trs, alpha, beta);
    return project_orthogonal(trs, a2, b2);
}

bool steps_equivalent(const TRS& trs, const ParallelStep& a, const ParallelStep& b) {
    return eq_rational(a.source, b.source) &&
           a.redexes.explicit_redexes == b.redexes.explicit_redexes &&
           eq_rational(target(trs, a), target(trs, b));
}

// ---------------------------------------------------------------------------
// Cube identity
// ---------------------------------------------------------------------------

CubeReport check_cube(const TRS& trs, const ParallelStep& alpha, const ParallelStep& beta,
                      const ParallelStep& gamma) {
    if (!eq_rational(alpha.source, beta.source) || !eq_rational(beta.source, gamma.source))
        throw input_error("check_cube: steps are not co-initial");
    ParallelStep ab = wo_project(trs, alpha, beta);
    ParallelStep gb = wo_project(trs, gamma, beta);
    ParallelStep ag = wo_project(trs, alpha, gamma);
    ParallelStep bg = wo_project(trs, beta, gamma);
    // Both inner corners agree by the diamond property for parallel steps.
    Term corner_b = target(trs, gb);
    Term corner_g = target(trs, bg);
    if (!eq_rational(corner_b, corner_g))
        throw property_violation("check_cube: elementary diamond failed");

    CubeReport rep;
    rep.lhs = wo_project(trs, ab, gb);
    rep.rhs = wo_project(trs, ag, bg);
    rep.lhs_target = target(trs, rep.lhs);
    rep.rhs_target = target(trs, rep.rhs);
    bool same_sets = rep.lhs.redexes.explicit_redexes == rep.rhs.redexes.explicit_redexes;
    bool same_targets = eq_rational(rep.lhs_target, rep.rhs_target);
    rep.holds = same_sets && same_targets;
    if (!rep.holds) {
        rep.discrepancy = !same_targets
                              ? "targets differ: " + to_string(rep.lhs_target) + " vs " +
                                    to_string(rep.rhs_target)
                              : "contracted sets differ: " +
                                    to_string(rep.lhs.redexes, rep.lhs.source) + " vs " +
                                    to_string(rep.rhs.redexes, rep.rhs.source);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Depth lift bounds
// ---------------------------------------------------------------------------

DepthLiftReport depth_lift_bound(const TRS& trs, const ParallelStep& alpha,
                                 const ParallelStep& beta) {
    DepthLiftReport rep;
    rep.d_alpha = min_depth(alpha);
    rep.d_beta = min_depth(beta);
    rep.collapse_free = trs.collapse_free();
    ParallelStep ab = wo_project(trs, alpha, beta);
    ParallelStep ba = wo_project(trs, beta, alpha);
    rep.d_ab = min_depth(ab);
    rep.d_ba = min_depth(ba);

    std::optional<int> floor_both = opt_min(rep.d_alpha, rep.d_beta);
    rep.general_bound_ok = at_least(rep.d_ab, floor_both) && at_least(rep.d_ba, floor_both);
    if (!rep.general_bound_ok)
        throw property_violation("depth_lift_bound: min(d_alpha,d_beta) violated");
    if (rep.collapse_free) {
        rep.sharpened_bound_ok = at_least(rep.d_ab, opt_min(rep.d_alpha, plus1(rep.d_beta))) &&
                                 at_least(rep.d_ba, opt_min(rep.d_beta, plus1(rep.d_alpha)));
        if (!rep.sharpened_bound_ok)
            throw property_violation("depth_lift_bound: collapse-free sharpened bound violated");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Strip/Lift
// ---------------------------------------------------------------------------

StripResult strip(const TRS& trs, const SegSeq& sigma, const ParallelStep& alpha, int d) {
    if (d < 0) throw input_error("strip: negative depth");
    require_explicit(alpha, "strip");
    if (!eq_rational(sigma.source, alpha.source))
        throw input_error("strip: sequence and step are not co-initial");

    int p = trs.max_pattern_depth();
    Materialized mat = materialize(trs, sigma, d + p);

    StripResult out;
    ParallelStep right = alpha;
    for (const RewriteStep& st : mat.steps) {
        ParallelStep step = singleton_step(trs, st);
        ParallelStep bottom = wo_project(trs, step, right);
        ParallelStep next = wo_project(trs, right, step);
        // Elementary diagram soundness: both paths close on the same corner.
        if (!eq_rational(target(trs, bottom), target(trs, next)))
            throw property_violation("strip: elementary diagram failed to close");
        auto seq_steps = develop_steps(trs, bottom.source, bottom.redexes.explicit_redexes);
        out.bottom_steps.insert(out.bottom_steps.end(), seq_steps.begin(), seq_steps.end());
        out.bottom_tiles.push_back(std::move(bottom));
        right = std::move(next);
        ++out.columns;
    }
    // The corner continues below depth d only; report the approximant.
    Term corner = target(trs, right);
    out.limit = unfold(corner, d);
    out.right = std::move(right);

    std::optional<int> d_sigma;
    for (const RewriteStep& st : mat.steps) d_sigma = opt_min(d_sigma, st.redex.pos.depth());
    if (!mat.exhausted) d_sigma = opt_min(d_sigma, mat.skipped_above + 1);
    std::optional<int> d_alpha = min_depth(alpha);
    for (const ParallelStep& tile : out.bottom_tiles)
        out.min_depth_bottom = opt_min(out.min_depth_bottom, min_depth(tile));
    out.min_depth_right = min_depth(out.right);

    std::optional<int> floor_both = opt_min(d_sigma, d_alpha);
    if (!at_least(out.min_depth_bottom, floor_both) || !at_least(out.min_depth_right, floor_both))
        throw property_violation("strip: depth bound min(d_sigma,d_alpha) violated");
    if (trs.collapse_free()) {
        if (!at_least(out.min_depth_bottom, opt_min(d_sigma, plus1(d_alpha))))
            throw property_violation("strip: collapse-free bottom bound violated");
        if (!at_least(out.min_depth_right, opt_min(d_alpha, plus1(d_sigma))))
            throw property_violation("strip: collapse-free right bound violated");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Confluence join
// ---------------------------------------------------------------------------

namespace {

// Join two finite single-step paths from a common source by tiling
// wo-projection diagrams. Returns the bottom row (continuing the tau path)
// and the right column (continuing the sigma path).
struct GridResult {
    std::vector<ParallelStep> bottom;  // from the end of the left path
    std::vector<ParallelStep> right;   // from the end of the top path
    Term corner;
};

GridResult join_finite(const TRS& trs, const Term& source, const std::vector<RewriteStep>& top,
                       const std::vector<RewriteStep>& left) {
    std::vector<ParallelStep> row;
    row.reserve(top.size());
    for (const RewriteStep& st : top) row.push_back(singleton_step(trs, st));

    std::vector<ParallelStep> right_col;
    for (const RewriteStep& lst : left) {
        ParallelStep vert = singleton_step(trs, lst);
        std::vector<ParallelStep> next_row;
        next_row.reserve(row.size());
        for (const ParallelStep& horiz : row) {
            ParallelStep bottom = wo_project(trs, horiz, vert);
            ParallelStep vert_next = wo_project(trs, vert, horiz);
            if (!eq_rational(target(trs, bottom), target(trs, vert_next)))
                throw property_violation("confluence_join: grid cell failed to close");
            next_row.push_back(std::move(bottom));
            vert = std::move(vert_next);
        }
        row = std::move(next_row);
        right_col.push_back(std::move(vert));
    }
    GridResult out;
    out.corner = row.empty() ? (right_col.empty() ? source : target(trs, right_col.back()))
                             : target(trs, row.back());
    out.bottom = std::move(row);      // from end of left path to the corner
    out.right = std::move(right_col); // from end of top path to the corner
    return out;
}

// Project a finite step list over one parallel step; returns the projected
// list (from target of the step) and the residual of the step from the end
// of the list.
struct TailStrip {
    std::vector<RewriteStep> tail;
    ParallelStep edge;
};

TailStrip strip_tail(const TRS& trs, const std::vector<RewriteStep>& tail,
                     const ParallelStep& step) {
    ParallelStep cur = step;
    std::vector<RewriteStep> out;
    for (const RewriteStep& st : tail) {
        ParallelStep single = singleton_step(trs, st);
        ParallelStep bottom = wo_project(trs, single, cur);
        ParallelStep next = wo_project(trs, cur, single);
        if (!eq_rational(target(trs, bottom), target(trs, next)))
            throw property_violation("confluence_join: tail diagram failed to close");
        auto seq = develop_steps(trs, bottom.source, bottom.redexes.explicit_redexes);
        out.insert(out.end(), seq.begin(), seq.end());
        cur = std::move(next);
    }
    return TailStrip{std::move(out), std::move(cur)};
}

}  // namespace

JoinResult confluence_join(const TRS& trs, const SegSeq& sigma, const SegSeq& tau, int d) {
    auto wov = is_weakly_orthogonal(trs);
    if (!wov.weakly_orthogonal)
        throw input_error("confluence_join: the system must be weakly orthogonal");
    auto collapsing = trs.collapsing_rules();
    if (!collapsing.empty()) {
        std::string names;
        for (const auto& n : collapsing) names += (names.empty() ? "" : ", ") + n;
        throw input_error("confluence_join: collapsing rules present (" + names +
                          "); infinitary confluence requires collapse-freeness, and such "
                          "systems admit co-initial reductions with no common reduct");
    }
    if (d < 0) throw input_error("confluence_join: negative depth");
    if (!eq_rational(sigma.source, tau.source))
        throw input_error("confluence_join: sequences are not co-initial");

    int p = trs.max_pattern_depth();
    int total = d + (d + 2) * p + 1;
    Materialized ms = materialize(trs, sigma, total);
    Materialized mt = materialize(trs, tau, total);

    JoinResult res;
    std::vector<RewriteStep> s_steps = ms.steps;
    std::vector<RewriteStep> t_steps = mt.steps;
    Term corner = sigma.source;

    for (int level = 0; level <= d; ++level) {
        // Split both lists after their last step at depth <= level.
        auto split = [&](std::vector<RewriteStep>& steps) {
            size_t cut = 0;
            for (size_t i = 0; i < steps.size(); ++i)
                if (steps[i].redex.pos.depth() <= level) cut = i + 1;
            std::vector<RewriteStep> prefix(steps.begin(), steps.begin() + static_cast<long>(cut));
            steps.erase(steps.begin(), steps.begin() + static_cast<long>(cut));
            return prefix;
        };
        std::vector<RewriteStep> s_prefix = split(s_steps);
        std::vector<RewriteStep> t_prefix = split(t_steps);
        if (s_prefix.empty() && t_prefix.empty()) continue;
        ++res.levels;

        GridResult grid = join_finite(trs, corner, s_prefix, t_prefix);

        // Project the remaining tails over the joining paths.
        std::vector<RewriteStep> s_tail = s_steps;
        for (const ParallelStep& edge : grid.right) {
            TailStrip ts = strip_tail(trs, s_tail, edge);
            s_tail = std::move(ts.tail);
            res.sigma_extension.push_back(std::move(ts.edge));
        }
        std::vector<RewriteStep> t_tail = t_steps;
        for (const ParallelStep& edge : grid.bottom) {
            TailStrip ts = strip_tail(trs, t_tail, edge);
            t_tail = std::move(ts.tail);
            res.tau_extension.push_back(std::move(ts.edge));
        }
        s_steps = std::move(s_tail);
        t_steps = std::move(t_tail);
        corner = grid.corner;
    }

    // Whatever remains is deeper than d; endpoints agree with the corner.
    Term s_end = s_steps.empty() ? corner : s_steps.back().target;
    Term t_end = t_steps.empty() ? corner : t_steps.back().target;
    if (!eq_to_depth(s_end, t_end, d) || !eq_to_depth(s_end, corner, d))
        throw property_violation("confluence_join: endpoints do not coincide at the budget");
    res.common = unfold(corner, d);
    return res;
}

// ---------------------------------------------------------------------------
// Diamond property for developments
// ---------------------------------------------------------------------------

DiamondResult diamond_join(const TRS& trs, const Development& u_dev, const Development& v_dev,
                           int d) {
    auto collapsing = trs.collapsing_rules();
    if (!collapsing.empty()) {
        std::string names;
        for (const auto& n : collapsing) names += (names.empty() ? "" : ", ") + n;
        throw input_error("diamond_join: collapsing rules present (" + names +
                          "); the diamond property requires collapse-freeness, and such "
                          "systems admit co-initial developments with no common reduct");
    }
    DiamondResult out;
    out.ortho = orthogonalize_developments(trs, u_dev, v_dev, d);

    // Keep the part of the orthogonalized pair above the budget; the dropped
    // deep redexes only touch the term below d.
    auto restrict_above = [&](const Development& dev) {
        std::vector<Redex> kept;
        for (const Redex& r : dev.redexes.explicit_redexes)
            if (r.pos.depth() < d) kept.push_back(r);
        return Development::make(trs, dev.source, kept);
    };
    Development U = restrict_above(out.ortho.u_dev);
    Development V = restrict_above(out.ortho.v_dev);
    check_orthogonal_pair(trs, U.redexes.explicit_redexes, V.redexes.explicit_redexes,
                          "diamond_join");

    const Term& t = U.source;
    std::vector<Redex> ru =
        residuals_after(trs, t, U.redexes.explicit_redexes, V.redexes.explicit_redexes);
    std::vector<Redex> rv =
        residuals_after(trs, t, V.redexes.explicit_redexes, U.redexes.explicit_redexes);
    auto v_steps = develop_steps(trs, t, V.redexes.explicit_redexes);
    Term v_end = v_steps.empty() ? t : v_steps.back().target;
    auto u_steps = develop_steps(trs, t, U.redexes.explicit_redexes);
    Term u_end = u_steps.empty() ? t : u_steps.back().target;

    out.closing_u = Development::make(trs, v_end, ru);
    out.closing_v = Development::make(trs, u_end, rv);

    Term left = develop(trs, v_end, out.closing_u.redexes, d);
    Term right = develop(trs, u_end, out.closing_v.redexes, d);
    if (!eq_to_depth(left, right, d))
        throw property_violation("diamond_join: closing developments do not meet at depth " +
                                 std::to_string(d));
    out.common = unfold(left, d);
    return out;
}

}  // namespace wo
