#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wo/orthogonalize.hpp"
#include "wo/sequence.hpp"

namespace wo {

/// Residuals of alpha's redexes after performing beta, for an orthogonal pair
/// of co-initial parallel steps: identical redexes cancel, redexes nested in
/// a beta redex are copied to the rhs occurrences of the enclosing variable,
/// everything else passes through. Result is a parallel step from target(beta).
ParallelStep project_orthogonal(const TRS& trs, const ParallelStep& alpha,
                                const ParallelStep& beta);

/// Weakly orthogonal projection alpha/beta: orthogonalize, then project.
ParallelStep wo_project(const TRS& trs, const ParallelStep& alpha, const ParallelStep& beta);

/// Step equivalence used by the unit identities: same source, same target,
/// same contracted (position, rule) set.
bool steps_equivalent(const TRS& trs, const ParallelStep& a, const ParallelStep& b);

struct CubeReport {
    bool holds = false;
    ParallelStep lhs;  // (alpha/beta)/(gamma/beta)
    ParallelStep rhs;  // (alpha/gamma)/(beta/gamma)
    Term lhs_target;
    Term rhs_target;
    std::string discrepancy;  // empty when the identity holds
};

/// Evaluate both sides of the cube identity and compare targets and redex
/// sets.
CubeReport check_cube(const TRS& trs, const ParallelStep& alpha, const ParallelStep& beta,
                      const ParallelStep& gamma);

struct DepthLiftReport {
    std::optional<int> d_alpha, d_beta;  // min redex depths (empty step: none)
    std::optional<int> d_ab, d_ba;       // min depths of alpha/beta and beta/alpha
    bool collapse_free = false;
    bool general_bound_ok = false;    // >= min(d_alpha, d_beta) both sides
    bool sharpened_bound_ok = false;  // collapse-free only
};

/// Checks the projection depth bounds; a violation is a bug in the engine and
/// raises property_violation.
DepthLiftReport depth_lift_bound(const TRS& trs, const ParallelStep& alpha,
                                 const ParallelStep& beta);

struct StripResult {
    std::vector<ParallelStep> bottom_tiles;  // one projected parallel step per consumed step
    std::vector<RewriteStep> bottom_steps;   // their innermost sequentialization
    ParallelStep right;                      // limit parallel step, exact above d
    Term limit;                              // common corner, truncated at d
    long columns = 0;
    std::optional<int> min_depth_bottom;
    std::optional<int> min_depth_right;
};

/// Tile elementary diagrams of sigma against the parallel step alpha, per the
/// Strip/Lift construction, computing to sigma's modulus at d + pattern depth.
StripResult strip(const TRS& trs, const SegSeq& sigma, const ParallelStep& alpha, int d);

struct JoinResult {
    std::vector<ParallelStep> sigma_extension;  // from sigma's endpoint
    std::vector<ParallelStep> tau_extension;    // from tau's endpoint
    Term common;                                // joint endpoint, truncated at d
    int levels = 0;
};

/// Depth-budgeted infinitary confluence join for weakly orthogonal systems
/// without collapsing rules: finitary diagram completion level by level,
/// tails projected by the strip construction, recursing with d+1 up to the
/// budget. Throws input_error when collapsing rules are present.
JoinResult confluence_join(const TRS& trs, const SegSeq& sigma, const SegSeq& tau, int d);

struct DiamondResult {
    Development closing_u;  // from target(V'), closes U's side
    Development closing_v;  // from target(U'), closes V's side
    Term common;            // joint target, truncated at d
    OrthoResult ortho;
};

/// Diamond property for developments: orthogonalize, project each side over
/// the other, verify the common target to depth d. Collapse-free systems only.
DiamondResult diamond_join(const TRS& trs, const Development& u_dev, const Development& v_dev,
                           int d);

}  // namespace wo
