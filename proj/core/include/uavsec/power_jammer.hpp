#ifndef UAVSEC_POWER_JAMMER_HPP
#define UAVSEC_POWER_JAMMER_HPP

#include <vector>

#include "uavsec/power_source.hpp"
#include "uavsec/rates.hpp"

namespace uavsec {

/// Auxiliary constants of the jammer-power subproblem for one slot:
/// objective log(1 + a/(b p + 1)) - log(1 + c/(d p + 1)),
/// harvest floor e + f p >= Psi_H.
struct JammerConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;
};

/// Linearization of the convex main-link term at an expansion power:
/// log(1 + a/(b p + 1)) >= b_hat + a_hat * p for all p >= 0, equality at p_k.
struct TaylorCoeffs {
  double a_hat = 0.0;  // <= 0
  double b_hat = 0.0;
};

JammerConstants jammer_constants(const SlotState& slot, const Geometry& geo,
                                 const ChannelParams& ch, double eta);

TaylorCoeffs linearize(const JammerConstants& k, double p_j_k);

/// Closed-form per-slot optimum of the convexified subproblem at a fixed
/// budget multiplier nu: quadratic-stationarity root clamped by the harvest
/// floor and the peak cap. Requires nu > a_hat.
double jammer_power_given_nu(const JammerConstants& k, const TaylorCoeffs& tp,
                             double nu, const PowerBudget& budget, double psi_h);

struct JammerSolveOptions {
  double sca_tol = 1e-6;
  int max_sca_iters = 50;
  double budget_tol = 1e-9;
};

struct JammerSolution {
  std::vector<double> p_j;
  bool converged = true;
  int sca_iters = 0;
};

/// Objective of the exact (non-surrogate) jammer-power block, nats.
/// FUJ drops the main-link term (jamming is cancelled at the destination).
double jammer_block_objective(const std::vector<JammerConstants>& ks,
                              const std::vector<double>& p_j, Scheme scheme);

/// SCA over the jammer powers: linearize, solve in closed form with a nu
/// bisection on the budget, repeat to a fixed point. GJT and FUJ only.
JammerSolution solve_jammer_power(const Plan& plan, Scheme scheme,
                                  const Geometry& geo, const ChannelParams& ch,
                                  double eta, const PowerBudget& budget,
                                  double psi_h, const JammerSolveOptions& opts = {});

}  // namespace uavsec

#endif
