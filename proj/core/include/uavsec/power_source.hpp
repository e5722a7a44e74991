#ifndef UAVSEC_POWER_SOURCE_HPP
#define UAVSEC_POWER_SOURCE_HPP

#include <stdexcept>
#include <vector>

#include "uavsec/rates.hpp"

namespace uavsec {

/// A per-slot harvesting floor exceeds the peak power cap; the slot cannot
/// meet its minimum-harvest requirement at any admissible power.
struct InfeasibleHarvest : std::runtime_error {
  std::size_t slot;
  explicit InfeasibleHarvest(std::size_t n, const std::string& what)
      : std::runtime_error(what), slot(n) {}
};

/// Per-UAV power budget, mW. p_peak = papr * p_avg.
struct PowerBudget {
  double p_avg = 0.0;
  double p_peak = 0.0;
};

/// Auxiliary constants of the source-power subproblem for one slot:
/// objective log(1+a p) - log(1+b p), harvest floor c p + d >= Psi_H.
struct SourceConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

SourceConstants source_constants(const SlotState& slot, Scheme scheme,
                                 const Geometry& geo, const ChannelParams& ch,
                                 double eta);

/// The closed-form per-slot optimum at a fixed budget multiplier lambda:
/// stationary value clamped by the harvesting floor and the peak cap.
/// lambda == 0 on the a >= b branch returns the peak cap (the stationary
/// value diverges).
double source_power_given_lambda(const SourceConstants& k, double lambda,
                                 const PowerBudget& budget, double psi_h);

/// Bisection on lambda until the total-power budget holds; complementary
/// slackness: either lambda ~ 0 with slack, or the budget is tight.
std::vector<double> solve_source_power(const Plan& plan, Scheme scheme,
                                       const Geometry& geo, const ChannelParams& ch,
                                       double eta, const PowerBudget& budget,
                                       double psi_h, double tol = 1e-9);

}  // namespace uavsec

#endif
