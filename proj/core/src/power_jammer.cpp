#include "uavsec/power_jammer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavsec {

JammerConstants jammer_constants(const SlotState& slot, const Geometry& geo,
                                 const ChannelParams& ch, double eta) {
  const double a2 = ch.alpha / 2.0;
  const double gamma0 = ch.beta_bar / ch.n0;
  const double gamma_s = slot.p_s * ch.beta_bar / ch.n0;
  const double h_sd = raw_path_gain(slot.q_s, geo.w_d, ch);
  const double h_jd = raw_path_gain(slot.q_j, geo.w_d, ch);
  const double h_se = std::pow(worstcase_source_eve_dist2(slot.q_s, geo), -a2);
  const double h_je = std::pow(worstcase_jammer_eve_dist2(slot.q_j, geo), -a2);

  JammerConstants k;
  k.a = slot.zeta * gamma_s * h_sd;
  k.b = gamma0 * slot.zeta * h_jd;
  k.c = gamma_s * h_se;
  k.d = gamma0 * h_je;
  k.e = eta * (1.0 - slot.zeta) * (slot.p_s * ch.beta_bar * h_sd + ch.n0);
  k.f = eta * ch.beta_bar * (1.0 - slot.zeta) * h_jd;
  return k;
}

TaylorCoeffs linearize(const JammerConstants& k, double p_j_k) {
  TaylorCoeffs t;
  if (k.a <= 0.0) return t;  // constant term, zero slope
  const double bp1 = k.b * p_j_k + 1.0;
  t.a_hat = -k.a * k.b / ((1.0 + k.a + k.b * p_j_k) * bp1);
  t.b_hat = std::log1p(k.a / bp1);
  return t;
}

namespace {

double jam_harvest_floor(const JammerConstants& k, double psi_h) {
  const double need = psi_h - k.e;
  if (need <= 0.0) return 0.0;
  if (k.f <= 0.0) return std::numeric_limits<double>::infinity();
  return need / k.f;
}

}  // namespace

double jammer_power_given_nu(const JammerConstants& k, const TaylorCoeffs& tp,
                             double nu, const PowerBudget& budget, double psi_h) {
  if (nu <= tp.a_hat)
    throw std::invalid_argument("jammer_power_given_nu: nu <= a_hat");
  const double floor = jam_harvest_floor(k, psi_h);
  double root;
  if (k.c <= 0.0 || k.d <= 0.0) {
    // Nothing to suppress at the eavesdropper: stationary value is negative.
    root = 0.0;
  } else {
    const double w = nu - tp.a_hat;
    const double disc = 4.0 * k.c * k.d / w + k.c * k.c;
    root = (std::sqrt(disc) - (k.c + 2.0)) / (2.0 * k.d);
    root = std::max(root, 0.0);
  }
  return std::min(std::max(root, floor), budget.p_peak);
}

double jammer_block_objective(const std::vector<JammerConstants>& ks,
                              const std::vector<double>& p_j, Scheme scheme) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const JammerConstants& k = ks[i];
    if (scheme == Scheme::GJT) acc += std::log1p(k.a / (k.b * p_j[i] + 1.0));
    acc -= std::log1p(k.c / (k.d * p_j[i] + 1.0));
  }
  return acc;
}

JammerSolution solve_jammer_power(const Plan& plan, Scheme scheme,
                                  const Geometry& geo, const ChannelParams& ch,
                                  double eta, const PowerBudget& budget,
                                  double psi_h, const JammerSolveOptions& opts) {
  if (scheme == Scheme::WoJ)
    throw std::logic_error("solve_jammer_power: WoJ has no jammer block");
  const std::size_t n = plan.slots();
  std::vector<JammerConstants> ks(n);
  for (std::size_t i = 0; i < n; ++i) {
    ks[i] = jammer_constants(plan.slot(i), geo, ch, eta);
    if (jam_harvest_floor(ks[i], psi_h) > budget.p_peak * (1.0 + 1e-12)) {
      throw InfeasibleHarvest(i, "jammer harvest floor exceeds peak power at slot " +
                                     std::to_string(i));
    }
  }
  const double p_tot = budget.p_avg * static_cast<double>(n);

  JammerSolution sol;
  sol.p_j = plan.p_j;  // warm start from the current iterate
  {
    // Project the warm start onto the feasible box; when its total exceeds
    // the budget, shrink the above-floor excess uniformly.
    double sum = 0.0, sum_floor = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double floor = jam_harvest_floor(ks[i], psi_h);
      sol.p_j[i] = std::min(std::max(sol.p_j[i], floor), budget.p_peak);
      sum += sol.p_j[i];
      sum_floor += floor;
    }
    if (sum > p_tot && sum > sum_floor) {
      const double t = std::max((p_tot - sum_floor) / (sum - sum_floor), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double floor = jam_harvest_floor(ks[i], psi_h);
        sol.p_j[i] = floor + t * (sol.p_j[i] - floor);
      }
    }
  }

  auto solve_given_taylor = [&](const std::vector<TaylorCoeffs>& tps) {
    std::vector<double> p(n), p_feas(n);
    double nu_floor = 0.0;  // need nu > max a_hat; a_hat <= 0, FUJ uses 0
    for (const auto& t : tps) nu_floor = std::max(nu_floor, t.a_hat);
    const double nu_lo_strict = nu_floor + 1e-15;

    auto total_at = [&](double nu, std::vector<double>& out) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = jammer_power_given_nu(ks[i], tps[i], nu, budget, psi_h);
        sum += out[i];
      }
      return sum;
    };

    if (total_at(nu_lo_strict, p) <= p_tot) return p;
    double lo = nu_lo_strict, hi = std::max(1.0, 2.0 * std::abs(nu_floor) + 1.0);
    double sum_hi = total_at(hi, p_feas);
    int grow = 0;
    while (sum_hi > p_tot && grow++ < 200) {
      hi *= 2.0;
      sum_hi = total_at(hi, p_feas);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double sum = total_at(mid, p);
      if (sum > p_tot) {
        lo = mid;
      } else {
        hi = mid;
        p_feas = p;
        sum_hi = sum;
      }
      if (std::abs(sum - p_tot) <= opts.budget_tol * std::max(p_tot, 1e-300)) break;
    }
    return p_feas;
  };

  double prev_obj = jammer_block_objective(ks, sol.p_j, scheme);
  sol.converged = false;
  for (int iter = 0; iter < opts.max_sca_iters; ++iter) {
    std::vector<TaylorCoeffs> tps(n);
    for (std::size_t i = 0; i < n; ++i) {
      tps[i] = (scheme == Scheme::GJT) ? linearize(ks[i], sol.p_j[i]) : TaylorCoeffs{};
    }
    std::vector<double> next = solve_given_taylor(tps);
    const double obj = jammer_block_objective(ks, next, scheme);
    sol.sca_iters = iter + 1;
    if (obj + 1e-12 < prev_obj) {
      // Surrogate guarantees ascent; numerical ties keep the previous iterate.
      break;
    }
    sol.p_j = std::move(next);
    if (std::abs(obj - prev_obj) <= opts.sca_tol * (1.0 + std::abs(prev_obj))) {
      sol.converged = true;
      prev_obj = obj;
      break;
    }
    prev_obj = obj;
  }
  if (!sol.converged && sol.sca_iters >= opts.max_sca_iters) {
    // best iterate returned, flagged by converged = false
  } else if (!sol.converged) {
    sol.converged = true;  // ascent stopped by tie, treated as a fixed point
  }

  // Exact coordinate-ascent polish. The per-slot objective is a difference of
  // two convex terms whose global shape often has one basin hugging p = 0 and
  // another at large power; the tangent surrogate cannot hop between them, so
  // each pass re-optimizes one slot exactly (1-D multi-resolution scan) inside
  // the budget slack left by the other slots. Monotone in the exact objective.
  auto slot_obj = [&](std::size_t i, double p) {
    double v = -std::log1p(ks[i].c / (ks[i].d * p + 1.0));
    if (scheme == Scheme::GJT) v += std::log1p(ks[i].a / (ks[i].b * p + 1.0));
    return v;
  };
  double used = 0.0;
  for (const double p : sol.p_j) used += p;
  for (int pass = 0; pass < 20; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double lb = jam_harvest_floor(ks[i], psi_h);
      const double ub = std::min(budget.p_peak, p_tot - (used - sol.p_j[i]));
      if (ub < lb) continue;
      double best_p = sol.p_j[i], best_v = slot_obj(i, sol.p_j[i]);
      double lo = lb, span = ub - lb;
      for (int round = 0; round < 4; ++round) {
        for (int g = 0; g <= 48; ++g) {
          const double p = lo + span * g / 48.0;
          const double v = slot_obj(i, p);
          if (v > best_v + 1e-12) {
            best_v = v;
            best_p = p;
          }
        }
        span /= 12.0;
        lo = std::min(std::max(lb, best_p - 0.5 * span), ub - span);
        if (lo < lb) lo = lb;
      }
      if (best_p != sol.p_j[i]) {
        used += best_p - sol.p_j[i];
        sol.p_j[i] = best_p;
        moved = true;
      }
    }
    // Pairwise transfers explore the budget face itself: when the total is
    // tight, no single-slot move can trade power between slots, so scan the
    // optimal split of each pair's combined power at a fixed sum.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double s = sol.p_j[i] + sol.p_j[j];
        const double lb_i = jam_harvest_floor(ks[i], psi_h);
        const double lb_j = jam_harvest_floor(ks[j], psi_h);
        double lo = std::max(lb_i, s - budget.p_peak);
        double hi = std::min(budget.p_peak, s - lb_j);
        if (hi < lo) continue;
        auto pair_obj = [&](double p) { return slot_obj(i, p) + slot_obj(j, s - p); };
        double best_p = sol.p_j[i], best_v = pair_obj(sol.p_j[i]);
        double span = hi - lo;
        for (int round = 0; round < 4; ++round) {
          for (int g = 0; g <= 48; ++g) {
            const double p = lo + span * g / 48.0;
            const double v = pair_obj(p);
            if (v > best_v + 1e-12) {
              best_v = v;
              best_p = p;
            }
          }
          span /= 12.0;
          lo = std::min(std::max(std::max(lb_i, s - budget.p_peak),
                                 best_p - 0.5 * span),
                        hi - span);
          if (lo > hi) lo = hi;
        }
        if (best_p != sol.p_j[i]) {
          sol.p_j[j] = s - best_p;
          sol.p_j[i] = best_p;
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  return sol;
}

}  // namespace uavsec
