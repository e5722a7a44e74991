#ifndef UAVSEC_TRAJECTORY_HPP
#define UAVSEC_TRAJECTORY_HPP

#include <stdexcept>
#include <vector>

#include "uavsec/convex_solver.hpp"
#include "uavsec/rates.hpp"

namespace uavsec {

/// Endpoint and per-slot displacement limits for one UAV.
struct TrajLimits {
  Position2D q_initial;
  Position2D q_final;
  double d_step = 0.0;
};

/// The SCA expansion point violates a subproblem constraint beyond tolerance.
struct InfeasibleExpansion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A built trajectory subproblem plus the variable layout needed to map the
/// solver result back onto the plan. Slot 0 is pinned by the endpoint
/// constraint and eliminated from the variable vector; slots whose transmit
/// power is zero carry no slack variables (their objective terms vanish).
struct TrajBuild {
  ConvexProgram prog;
  std::vector<int> qx, qy;      // per-slot coordinate indices; -1 when pinned
  std::vector<int> aux1, aux2;  // T/U (source) or S~/V~ (jammer); -1 absent
};

/// (P9)-style convexified source-trajectory subproblem for GJT/FUJ.
/// Expansion point: the plan's current source path and slack caches.
TrajBuild build_source_subproblem(const Plan& plan, Scheme scheme,
                                  const Geometry& geo, const ChannelParams& ch,
                                  double eta, double psi_h,
                                  const TrajLimits& limits);

/// (P11)-style subproblem for WoJ: same structure without the collision
/// constraint or jamming terms.
TrajBuild build_woj_subproblem(const Plan& plan, const Geometry& geo,
                               const ChannelParams& ch, double eta, double psi_h,
                               const TrajLimits& limits);

/// (P14)-style convexified jammer-trajectory subproblem for GJT/FUJ.
TrajBuild build_jammer_subproblem(const Plan& plan, Scheme scheme,
                                  const Geometry& geo, const ChannelParams& ch,
                                  double eta, double psi_h,
                                  const TrajLimits& limits);

/// Exact (non-surrogate) source-trajectory block objective, nats.
double source_block_objective(const Plan& plan, Scheme scheme, const Geometry& geo,
                              const ChannelParams& ch);

/// Exact jammer-trajectory block objective, nats.
double jammer_block_objective_traj(const Plan& plan, Scheme scheme,
                                   const Geometry& geo, const ChannelParams& ch);

struct TrajBlockResult {
  SolveStatus status = SolveStatus::Optimal;
  bool accepted = false;  // false: expansion point kept (no exact improvement)
  double objective_before = 0.0;
  double objective_after = 0.0;
};

struct TrajSolveOptions {
  SolverOptions solver;
  double norm_eps = 1e-9;       // smoothing of ||q - w|| terms (set at build)
  double decrease_slack = 1e-9; // exact-objective decreases below this accept as tie
  double decrease_fatal = 1e-4; // beyond this the surrogate bound is broken
};

/// Solves the built subproblem and maps the result back into the plan's
/// source path (and slack caches). The exact block objective must not
/// decrease; small solver-tolerance decreases keep the expansion point,
/// larger ones indicate a broken bound and throw.
TrajBlockResult solve_source_block(Plan& plan, Scheme scheme, const Geometry& geo,
                                   const ChannelParams& ch, double eta, double psi_h,
                                   const TrajLimits& limits,
                                   const TrajSolveOptions& opts = {});

TrajBlockResult solve_jammer_block(Plan& plan, Scheme scheme, const Geometry& geo,
                                   const ChannelParams& ch, double eta, double psi_h,
                                   const TrajLimits& limits,
                                   const TrajSolveOptions& opts = {});

}  // namespace uavsec

#endif
