#include "uavsec/power_source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavsec {

SourceConstants source_constants(const SlotState& slot, Scheme scheme,
                                 const Geometry& geo, const ChannelParams& ch,
                                 double eta) {
  const double a2 = ch.alpha / 2.0;
  const double gamma0 = ch.beta_bar / ch.n0;
  const double p_j = (scheme == Scheme::WoJ) ? 0.0 : slot.p_j;
  const double gamma_j = p_j * ch.beta_bar / ch.n0;
  const double h_sd = raw_path_gain(slot.q_s, geo.w_d, ch);
  const double h_jd = raw_path_gain(slot.q_j, geo.w_d, ch);
  const double h_se = std::pow(worstcase_source_eve_dist2(slot.q_s, geo), -a2);
  const double h_je = std::pow(worstcase_jammer_eve_dist2(slot.q_j, geo), -a2);

  SourceConstants k;
  if (scheme == Scheme::GJT) {
    k.a = gamma0 * slot.zeta * h_sd / (slot.zeta * gamma_j * h_jd + 1.0);
  } else {
    // FUJ cancels the jamming term at the destination; WoJ has none.
    k.a = gamma0 * slot.zeta * h_sd;
  }
  k.b = gamma0 * h_se / (gamma_j * h_je + 1.0);
  k.c = eta * ch.beta_bar * (1.0 - slot.zeta) * h_sd;
  k.d = eta * (1.0 - slot.zeta) * (p_j * ch.beta_bar * h_jd + ch.n0);
  return k;
}

namespace {

double harvest_floor(const SourceConstants& k, double psi_h) {
  const double need = psi_h - k.d;
  if (need <= 0.0) return 0.0;
  if (k.c <= 0.0) return std::numeric_limits<double>::infinity();
  return need / k.c;
}

// Unclamped stationary point of log(1+ap) - log(1+bp) - lambda p, a >= b.
double stationary_power(const SourceConstants& k, double lambda) {
  if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
  if (k.a <= 0.0) return 0.0;
  const double inv_b = 1.0 / k.b;
  const double inv_a = 1.0 / k.a;
  const double gap = inv_b - inv_a;  // >= 0 on this branch
  const double disc = gap * gap + 4.0 / lambda * gap;
  return 0.5 * (std::sqrt(disc) - (inv_b + inv_a));
}

}  // namespace

double source_power_given_lambda(const SourceConstants& k, double lambda,
                                 const PowerBudget& budget, double psi_h) {
  const double floor = harvest_floor(k, psi_h);
  if (k.a < k.b) {
    // Jamming-dominated slot: transmitting only hurts secrecy, keep the floor.
    return std::min(floor, budget.p_peak);
  }
  if (lambda < 0.0) throw std::invalid_argument("source_power_given_lambda: lambda < 0");
  const double p = std::max(floor, stationary_power(k, lambda));
  return std::min(p, budget.p_peak);
}

std::vector<double> solve_source_power(const Plan& plan, Scheme scheme,
                                       const Geometry& geo, const ChannelParams& ch,
                                       double eta, const PowerBudget& budget,
                                       double psi_h, double tol) {
  const std::size_t n = plan.slots();
  std::vector<SourceConstants> ks(n);
  double lambda_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = source_constants(plan.slot(i), scheme, geo, ch, eta);
    if (harvest_floor(ks[i], psi_h) > budget.p_peak * (1.0 + 1e-12)) {
      throw InfeasibleHarvest(i, "source harvest floor exceeds peak power at slot " +
                                     std::to_string(i));
    }
    lambda_max = std::max(lambda_max, ks[i].a);
  }
  const double p_tot = budget.p_avg * static_cast<double>(n);

  auto total_at = [&](double lambda, std::vector<double>& out) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = source_power_given_lambda(ks[i], lambda, budget, psi_h);
      sum += out[i];
    }
    return sum;
  };

  std::vector<double> p(n);
  if (total_at(0.0, p) <= p_tot) return p;  // budget slack, lambda* = 0

  // Beyond lambda_max every stationary value is <= 0 and only floors remain.
  double lo = 0.0, hi = std::max(lambda_max, 1e-30);
  std::vector<double> p_hi(n);
  double sum_hi = total_at(hi, p_hi);
  int grow = 0;
  while (sum_hi > p_tot && grow++ < 64) {
    hi *= 2.0;
    sum_hi = total_at(hi, p_hi);
  }
  if (sum_hi > p_tot) {
    // Floors alone exceed the budget; fall through with the feasible-harvest
    // allocation (C1 is then violated and will be reported by validate()).
    return p_hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double sum = total_at(mid, p);
    if (sum > p_tot) {
      lo = mid;
    } else {
      hi = mid;
      p_hi = p;
      sum_hi = sum;
    }
    if (std::abs(sum - p_tot) <= tol * p_tot) break;
  }
  // Return the budget-feasible side of the bracket.
  return p_hi;
}

}  // namespace uavsec
