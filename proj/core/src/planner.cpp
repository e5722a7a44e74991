#include "uavsec/planner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "uavsec/psr.hpp"

namespace uavsec {

namespace {

constexpr double kTol = 1e-9;

double unclamped_asr(const Plan& plan, const MissionConfig& cfg) {
  return average_secrecy(plan, cfg.scheme, cfg.geo, cfg.ch, false);
}

// One greedy path: approach `loiter` at full speed, hover while the
// remaining slots still cover the way to `q_f`, then head home.
std::vector<Position2D> greedy_path(const Position2D& q_i, const Position2D& q_f,
                                    const Position2D& loiter, std::size_t n_slots,
                                    double d, const char* who) {
  std::vector<Position2D> path(n_slots);
  path[0] = q_i;
  for (std::size_t n = 1; n < n_slots; ++n) {
    const Position2D cur = path[n - 1];
    Position2D to = loiter - cur;
    const double dist = to.norm();
    Position2D cand = (dist <= d) ? loiter : cur + to * (d / dist);
    // Steps left after this slot, plus the final C7/C10 hop.
    const double reach = static_cast<double>(n_slots - n) * d;
    if ((cand - q_f).norm() > reach + 1e-12) {
      Position2D home = q_f - cur;
      const double dh = home.norm();
      cand = (dh <= d) ? q_f : cur + home * (d / dh);
    }
    path[n] = cand;
  }
  if ((path[n_slots - 1] - q_f).norm() > d * (1.0 + kTol))
    throw InfeasibleMission(std::string(who) +
                            " cannot reach its terminal position within the "
                            "mission time");
  return path;
}

void refreshed_slacks(Plan& plan, const MissionConfig& cfg) {
  const double a2 = 0.5 * cfg.ch.alpha;
  const double H2 = cfg.ch.altitude * cfg.ch.altitude;
  const std::size_t N = plan.slots();
  plan.t_slack.resize(N);
  plan.u_slack.resize(N);
  plan.s_log.resize(N);
  plan.v_log.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    plan.t_slack[n] = (plan.q_s[n] - cfg.geo.w_d).norm2() + H2;
    plan.u_slack[n] = worstcase_source_eve_dist2(plan.q_s[n], cfg.geo);
    plan.s_log[n] = a2 * std::log((plan.q_j[n] - cfg.geo.w_d).norm2() + H2);
    plan.v_log[n] = a2 * std::log(worstcase_jammer_eve_dist2(plan.q_j[n], cfg.geo));
  }
}

}  // namespace

double feasibility_radius(const MissionConfig& cfg) {
  if (cfg.psi_h <= 0.0) return std::numeric_limits<double>::infinity();
  const double p_r_hat = cfg.budget_s.p_peak + cfg.budget_j.p_peak;
  const double t = std::pow(p_r_hat * cfg.ch.beta_bar / cfg.psi_h, 2.0 / cfg.ch.alpha);
  const double h2 = cfg.ch.altitude * cfg.ch.altitude;
  return t > h2 ? std::sqrt(t - h2) : 0.0;
}

void validate_config(const MissionConfig& cfg) {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (cfg.n_slots < 2) fail("n_slots must be at least 2");
  if (cfg.mission_time_s <= 0.0) fail("mission_time_s must be positive");
  if (cfg.d_step <= 0.0) fail("d_step_max must be positive");
  if (cfg.epsilon <= 0.0) fail("epsilon must be positive");
  if (cfg.eta <= 0.0 || cfg.eta > 1.0) fail("eta must lie in (0, 1]");
  if (cfg.ch.alpha < 2.0 || cfg.ch.alpha > 4.0) fail("alpha must lie in [2, 4]");
  if (cfg.ch.altitude < 1.0)
    fail("altitude below 1 leaves the distance-slack harvest constraint "
         "outside its convexity regime; use H >= 1");
  if (cfg.geo.altitude != cfg.ch.altitude)
    fail("geometry and channel altitude disagree");
  if (cfg.geo.r_fly <= 0.0) fail("flying radius must be positive");
  if (cfg.geo.r_e < 0.0) fail("eavesdropper radius must be nonnegative");
  if (cfg.geo.d_safe <= 0.0) fail("safety distance must be positive");
  if (cfg.budget_s.p_avg <= 0.0 || cfg.budget_s.p_peak < cfg.budget_s.p_avg)
    fail("source power budget must satisfy 0 < p_avg <= p_peak");
  if (cfg.scheme != Scheme::WoJ &&
      (cfg.budget_j.p_avg <= 0.0 || cfg.budget_j.p_peak < cfg.budget_j.p_avg))
    fail("jammer power budget must satisfy 0 < p_avg <= p_peak");
  for (const Position2D* q : {&cfg.q_si, &cfg.q_sf, &cfg.q_ji, &cfg.q_jf}) {
    if ((*q - cfg.geo.w_d).norm() > cfg.geo.r_fly * (1.0 + kTol))
      fail("a UAV endpoint lies outside the flying zone");
  }

  if (cfg.d_step > 0.5 * cfg.ch.altitude)
    std::cerr << "warning: d_step_max = " << cfg.d_step
              << " is not small against the altitude H = " << cfg.ch.altitude
              << "; the invariant-channel-per-slot assumption weakens\n";

  const double r_feas = feasibility_radius(cfg);
  if (cfg.geo.r_fly > r_feas + kTol) {
    std::ostringstream os;
    os << "flying radius " << cfg.geo.r_fly
       << " exceeds the energy-harvesting feasibility radius " << r_feas
       << "; power outage is possible inside the zone";
    throw InfeasibleMission(os.str());
  }
  // Endpoint reachability: N-1 internal steps plus the terminal hop.
  const double reach = static_cast<double>(cfg.n_slots) * cfg.d_step;
  if ((cfg.q_si - cfg.q_sf).norm() > reach + kTol)
    throw InfeasibleMission("source endpoints unreachable within the mission time");
  if (cfg.scheme != Scheme::WoJ && (cfg.q_ji - cfg.q_jf).norm() > reach + kTol)
    throw InfeasibleMission("jammer endpoints unreachable within the mission time");
}

std::pair<std::vector<Position2D>, std::vector<Position2D>> baseline_trajectory(
    const MissionConfig& cfg) {
  auto q_s = greedy_path(cfg.q_si, cfg.q_sf, cfg.geo.w_d, cfg.n_slots, cfg.d_step,
                         "source UAV");
  if (cfg.scheme == Scheme::WoJ)
    return {std::move(q_s), std::vector<Position2D>(cfg.n_slots, cfg.q_ji)};

  auto q_j = greedy_path(cfg.q_ji, cfg.q_jf, cfg.geo.w_e_hat, cfg.n_slots,
                         cfg.d_step, "jammer UAV");
  // Repair pass: wherever the greedy paths come closer than the safety
  // distance, push the jammer radially off the source, then restore path
  // continuity by alternating projections onto the step, zone, terminal-hop
  // and collision sets until all of them hold simultaneously.
  if ((q_j[0] - q_s[0]).norm() < cfg.geo.d_safe * (1.0 - 1e-12))
    throw InfeasibleMission(
        "the initial UAV positions violate the safety distance");
  const std::size_t N = cfg.n_slots;
  const double clearance = cfg.geo.d_safe * (1.0 + 1e-9);
  bool ok = false;
  for (int pass = 0; pass < 400 && !ok; ++pass) {
    for (std::size_t n = 1; n < N; ++n) {
      Position2D sep = q_j[n] - q_s[n];
      double dist = sep.norm();
      if (dist >= clearance) continue;
      if (dist < 1e-12) {
        sep = {0.0, 1.0};
        dist = 1.0;
      }
      q_j[n] = q_s[n] + sep * (clearance / dist);
    }
    for (std::size_t n = 1; n < N; ++n) {
      const Position2D rad = q_j[n] - cfg.geo.w_d;
      const double r = rad.norm();
      if (r > cfg.geo.r_fly) q_j[n] = cfg.geo.w_d + rad * (cfg.geo.r_fly / r);
    }
    {
      const Position2D d = q_j[N - 1] - cfg.q_jf;
      const double len = d.norm();
      if (len > cfg.d_step) q_j[N - 1] = cfg.q_jf + d * (cfg.d_step / len);
    }
    for (std::size_t n = N - 1; n >= 2; --n) {
      const Position2D d = q_j[n - 1] - q_j[n];
      const double len = d.norm();
      if (len > cfg.d_step) q_j[n - 1] = q_j[n] + d * (cfg.d_step / len);
    }
    for (std::size_t n = 1; n < N; ++n) {
      const Position2D d = q_j[n] - q_j[n - 1];
      const double len = d.norm();
      if (len > cfg.d_step) q_j[n] = q_j[n - 1] + d * (cfg.d_step / len);
    }
    ok = (q_j[N - 1] - cfg.q_jf).norm() <= cfg.d_step * (1.0 + kTol);
    for (std::size_t n = 1; n < N && ok; ++n) {
      ok = (q_j[n] - q_s[n]).norm() >= cfg.geo.d_safe - 1e-12 &&
           (q_j[n] - q_j[n - 1]).norm() <= cfg.d_step * (1.0 + 1e-12) &&
           (q_j[n] - cfg.geo.w_d).norm() <= cfg.geo.r_fly * (1.0 + 1e-12);
    }
  }
  if (!ok)
    throw InfeasibleMission(
        "collision-avoidance repair of the baseline jammer path broke the "
        "per-slot displacement bound");
  return {std::move(q_s), std::move(q_j)};
}

Plan initialize(const MissionConfig& cfg) {
  validate_config(cfg);
  const std::size_t N = cfg.n_slots;
  Plan plan;
  plan.set_size(N);
  auto [q_s, q_j] = baseline_trajectory(cfg);
  plan.q_s = std::move(q_s);
  plan.q_j = std::move(q_j);

  const bool jamming = cfg.scheme != Scheme::WoJ;
  for (std::size_t n = 0; n < N; ++n) {
    plan.p_s[n] = cfg.budget_s.p_avg;
    plan.p_j[n] = jamming ? cfg.budget_j.p_avg : 0.0;
    plan.zeta[n] = 0.0;
  }
  // Lift powers to the zeta = 0 harvesting floor where the average power
  // cannot reach it; the floor at zeta = 0 is the weakest requirement.
  for (std::size_t n = 0; n < N; ++n) {
    const double h_sd = raw_path_gain(plan.q_s[n], cfg.geo.w_d, cfg.ch);
    const double h_jd = raw_path_gain(plan.q_j[n], cfg.geo.w_d, cfg.ch);
    auto harvest = [&](double ps, double pj) {
      return cfg.eta *
             (ps * cfg.ch.beta_bar * h_sd + pj * cfg.ch.beta_bar * h_jd + cfg.ch.n0);
    };
    if (harvest(plan.p_s[n], plan.p_j[n]) >= cfg.psi_h) continue;
    double need =
        (cfg.psi_h / cfg.eta - cfg.ch.n0 - plan.p_j[n] * cfg.ch.beta_bar * h_jd) /
        (cfg.ch.beta_bar * h_sd);
    plan.p_s[n] = std::min(std::max(plan.p_s[n], need), cfg.budget_s.p_peak);
    if (jamming && harvest(plan.p_s[n], plan.p_j[n]) < cfg.psi_h) {
      need = (cfg.psi_h / cfg.eta - cfg.ch.n0 -
              plan.p_s[n] * cfg.ch.beta_bar * h_sd) /
             (cfg.ch.beta_bar * h_jd);
      plan.p_j[n] = std::min(std::max(plan.p_j[n], need), cfg.budget_j.p_peak);
    }
    if (harvest(plan.p_s[n], plan.p_j[n]) < cfg.psi_h - kTol)
      throw InfeasibleMission(
          "slot " + std::to_string(n) +
          " cannot meet the harvest floor even at peak powers");
  }
  for (std::size_t n = 0; n < N; ++n) {
    plan.zeta[n] = optimal_psr(psr_constants(plan.slot(n), cfg.scheme, cfg.geo, cfg.ch),
                               cfg.eta, cfg.psi_h);
  }

  auto viol = validate(plan, cfg);
  if (!viol.empty())
    throw InfeasibleMission("initialization violates " + viol.front().constraint +
                            " at slot " + std::to_string(viol.front().slot) +
                            " by " + std::to_string(viol.front().magnitude));
  refreshed_slacks(plan, cfg);
  return plan;
}

BlockDeltas bcd_iterate(Plan& plan, const MissionConfig& cfg) {
  BlockDeltas d;
  double prev = unclamped_asr(plan, cfg);

  plan.p_s = solve_source_power(plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta,
                                cfg.budget_s, cfg.psi_h);
  double cur = unclamped_asr(plan, cfg);
  d.source_power = cur - prev;
  prev = cur;

  if (cfg.scheme != Scheme::WoJ) {
    plan.p_j = solve_jammer_power(plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta,
                                  cfg.budget_j, cfg.psi_h, cfg.jammer)
                   .p_j;
    cur = unclamped_asr(plan, cfg);
    d.jammer_power = cur - prev;
    prev = cur;
  }

  for (std::size_t n = 0; n < plan.slots(); ++n) {
    // The FUJ/WoJ cap ignores the jamming contribution and can drift below
    // the previous split as powers move between iterations; the previous
    // split stays feasible, so keeping it preserves block monotonicity.
    const double star = optimal_psr(
        psr_constants(plan.slot(n), cfg.scheme, cfg.geo, cfg.ch), cfg.eta,
        cfg.psi_h);
    plan.zeta[n] = std::max(star, plan.zeta[n]);
  }
  cur = unclamped_asr(plan, cfg);
  d.psr = cur - prev;
  prev = cur;

  TrajSolveOptions topts;
  topts.solver = cfg.solver;
  const TrajLimits source_limits{cfg.q_si, cfg.q_sf, cfg.d_step};
  solve_source_block(plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta, cfg.psi_h,
                     source_limits, topts);
  cur = unclamped_asr(plan, cfg);
  d.source_traj = cur - prev;
  prev = cur;

  if (cfg.scheme != Scheme::WoJ) {
    const TrajLimits jammer_limits{cfg.q_ji, cfg.q_jf, cfg.d_step};
    solve_jammer_block(plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta, cfg.psi_h,
                       jammer_limits, topts);
    cur = unclamped_asr(plan, cfg);
    d.jammer_traj = cur - prev;
  }
  return d;
}

OptimizeResult optimize(const MissionConfig& cfg) {
  OptimizeResult res;
  res.plan = initialize(cfg);
  res.trace.asr.push_back(unclamped_asr(res.plan, cfg));
  for (int it = 0; it < cfg.max_bcd_iters; ++it) {
    const BlockDeltas d = bcd_iterate(res.plan, cfg);
    res.trace.deltas.push_back(d);
    res.trace.asr.push_back(unclamped_asr(res.plan, cfg));
    res.trace.iterations = it + 1;
    const double step =
        std::abs(res.trace.asr.back() - res.trace.asr[res.trace.asr.size() - 2]);
    if (step < cfg.epsilon) {
      res.trace.reason = StopReason::Epsilon;
      res.converged = true;
      break;
    }
  }
  res.metrics = metrics(res.plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta);
  return res;
}

std::vector<Violation> validate(const Plan& plan, const MissionConfig& cfg) {
  std::vector<Violation> out;
  const std::size_t N = plan.slots();
  auto flag = [&out](const char* c, std::size_t n, double mag) {
    if (mag > kTol) out.push_back({c, n, mag});
  };

  double sum_s = 0.0, sum_j = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    sum_s += plan.p_s[n];
    sum_j += plan.p_j[n];
    flag("C2", n, -plan.p_s[n]);
    flag("C2", n, plan.p_s[n] - cfg.budget_s.p_peak);
    flag("C4", n, -plan.p_j[n]);
    if (cfg.scheme == Scheme::WoJ)
      flag("C4", n, plan.p_j[n]);  // no jamming power at all
    else
      flag("C4", n, plan.p_j[n] - cfg.budget_j.p_peak);
    flag("C14", n, -plan.zeta[n]);
    // zeta must stay strictly below 1; the optimizer caps it at 1 - 1e-9.
    if (plan.zeta[n] > 1.0 - 1e-10)
      out.push_back({"C14", n, plan.zeta[n] - (1.0 - 1e-9)});
    flag("C15", n,
         cfg.psi_h - harvested_power(plan.slot(n), cfg.geo, cfg.ch, cfg.eta));
    flag("C12", n, (plan.q_s[n] - cfg.geo.w_d).norm() - cfg.geo.r_fly);
    if (cfg.scheme != Scheme::WoJ) {
      flag("C13", n, (plan.q_j[n] - cfg.geo.w_d).norm() - cfg.geo.r_fly);
      flag("C11", n, cfg.geo.d_safe - (plan.q_s[n] - plan.q_j[n]).norm());
    }
    if (n > 0) {
      flag("C6", n, (plan.q_s[n] - plan.q_s[n - 1]).norm() - cfg.d_step);
      if (cfg.scheme != Scheme::WoJ)
        flag("C9", n, (plan.q_j[n] - plan.q_j[n - 1]).norm() - cfg.d_step);
    }
  }
  flag("C1", 0, sum_s - static_cast<double>(N) * cfg.budget_s.p_avg);
  if (cfg.scheme != Scheme::WoJ)
    flag("C3", 0, sum_j - static_cast<double>(N) * cfg.budget_j.p_avg);
  flag("C5", 0, (plan.q_s[0] - cfg.q_si).norm());
  flag("C7", N - 1, (cfg.q_sf - plan.q_s[N - 1]).norm() - cfg.d_step);
  if (cfg.scheme != Scheme::WoJ) {
    flag("C8", 0, (plan.q_j[0] - cfg.q_ji).norm());
    flag("C10", N - 1, (cfg.q_jf - plan.q_j[N - 1]).norm() - cfg.d_step);
  }
  return out;
}

}  // namespace uavsec
