#include "uavsec/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace uavsec {

namespace {

constexpr double kMwToW = 1e-3;

void write_file(const std::string& path, const std::string& body) {
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos)
    std::filesystem::create_directories(path.substr(0, slash));
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path);
}

double mean_finite_isee(const RateMetrics& m) {
  double sum = 0.0;
  std::size_t cnt = 0;
  for (const auto& s : m.per_slot) {
    if (std::isfinite(s.isee)) {
      sum += s.isee;
      ++cnt;
    }
  }
  return cnt ? sum / static_cast<double>(cnt) : 0.0;
}

const char* stop_name(StopReason r) {
  return r == StopReason::Epsilon ? "epsilon" : "max_iters";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

RunReport make_report(const MissionConfig& cfg, const OptimizeResult& result) {
  return {cfg, result.plan, result.metrics, result.trace, result.converged, false};
}

std::string slots_csv(const RunReport& r) {
  std::ostringstream os;
  os << "slot,time_s,qs_x,qs_y,qj_x,qj_y,p_s_w,p_j_w,zeta,isr_bits,"
        "harvested_w,isee,harvest_eff\n";
  const double dt = r.cfg.mission_time_s / static_cast<double>(r.cfg.n_slots);
  for (std::size_t n = 0; n < r.plan.slots(); ++n) {
    const auto& m = r.metrics.per_slot[n];
    os << n << ',' << format_number(static_cast<double>(n) * dt) << ','
       << format_number(r.plan.q_s[n].x) << ',' << format_number(r.plan.q_s[n].y)
       << ',' << format_number(r.plan.q_j[n].x) << ','
       << format_number(r.plan.q_j[n].y) << ','
       << format_number(r.plan.p_s[n] * kMwToW) << ','
       << format_number(r.plan.p_j[n] * kMwToW) << ','
       << format_number(r.plan.zeta[n]) << ',' << format_number(m.isr) << ','
       << format_number(m.harvested * kMwToW) << ',' << format_number(m.isee)
       << ',' << format_number(m.harvest_efficiency) << '\n';
  }
  return os.str();
}

std::string trace_csv(const RunReport& r) {
  std::ostringstream os;
  os << "iteration,asr_bits\n";
  for (std::size_t i = 0; i < r.trace.asr.size(); ++i)
    os << i << ',' << format_number(r.trace.asr[i]) << '\n';
  return os.str();
}

std::string summary_text(const RunReport& r) {
  std::ostringstream os;
  os << "scheme=" << scheme_name(r.cfg.scheme) << '\n'
     << "n_slots=" << r.cfg.n_slots << '\n'
     << "baseline_only=" << (r.baseline_only ? 1 : 0) << '\n'
     << "converged=" << (r.converged ? 1 : 0) << '\n'
     << "terminated_by=" << (r.baseline_only ? "baseline" : stop_name(r.trace.reason))
     << '\n'
     << "iterations=" << r.trace.iterations << '\n'
     << "asr_bits=" << format_number(r.metrics.asr_clamped) << '\n'
     << "asr_unclamped_bits=" << format_number(r.metrics.asr_unclamped) << '\n'
     << "ahe_w=" << format_number(r.metrics.ahe * kMwToW) << '\n'
     << "harvest_ratio=" << format_number(r.metrics.harvest_ratio) << '\n'
     << "mean_isee=" << format_number(mean_finite_isee(r.metrics)) << '\n';
  return os.str();
}

int run_mission(const MissionConfig& cfg, const std::string& out_dir,
                bool baseline_only) {
  RunReport rep;
  rep.cfg = cfg;
  try {
    if (baseline_only) {
      rep.plan = initialize(cfg);
      rep.metrics = metrics(rep.plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta);
      rep.trace.asr.push_back(rep.metrics.asr_unclamped);
      rep.converged = true;
      rep.baseline_only = true;
    } else {
      const OptimizeResult res = optimize(cfg);
      rep = make_report(cfg, res);
    }
    write_file(out_dir + "/slots.csv", slots_csv(rep));
    write_file(out_dir + "/trace.csv", trace_csv(rep));
    write_file(out_dir + "/summary.txt", summary_text(rep));
  } catch (const InfeasibleMission& e) {
    std::cerr << "infeasible mission: " << e.what() << '\n';
    return 1;
  } catch (const InfeasibleHarvest& e) {
    std::cerr << "infeasible harvest requirement: " << e.what() << '\n';
    return 1;
  } catch (const InfeasibleExpansion& e) {
    std::cerr << "infeasible subproblem: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return (rep.converged || rep.baseline_only) ? 0 : 2;
}

MissionConfig apply_sweep_param(const MissionConfig& base, const std::string& param,
                                double value) {
  MissionConfig cfg = base;
  if (param == "eve_radius") {
    if (value < 0.0) throw ConfigError("eve_radius must be nonnegative");
    cfg.geo.r_e = value;
  } else if (param == "eve_distance") {
    Position2D dir = base.geo.w_e_hat - base.geo.w_d;
    const double d = dir.norm();
    if (d < 1e-12) dir = {1.0, 0.0};
    else dir = dir * (1.0 / d);
    cfg.geo.w_e_hat = base.geo.w_d + dir * value;
  } else if (param == "mission_time") {
    if (value <= 0.0) throw ConfigError("mission_time must be positive");
    // Fixed maximum speed: the per-slot displacement scales with T.
    cfg.d_step = base.d_step * value / base.mission_time_s;
    cfg.mission_time_s = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + param +
                      "' (expected eve_radius, eve_distance or mission_time)");
  }
  return cfg;
}

int run_sweep(const MissionConfig& base, const std::string& param,
              const std::vector<double>& values, const std::vector<Scheme>& schemes,
              const std::string& out_dir, int workers) {
  if (values.empty()) {
    std::cerr << "sweep: no values given\n";
    return 1;
  }
  std::vector<SweepPoint> points;
  for (const double v : values)
    for (const Scheme s : schemes) points.push_back({v, s, "", 0.0, 0.0, 0.0});

  if (workers <= 0) {
    workers = 1;
    if (const char* env = std::getenv("UAVSEC_WORKERS")) {
      const int w = std::atoi(env);
      if (w > 0) workers = w;
    }
  }
  workers = std::min<int>(workers, static_cast<int>(points.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < points.size();
         i = next.fetch_add(1)) {
      SweepPoint& p = points[i];
      try {
        MissionConfig cfg = apply_sweep_param(base, param, p.value);
        cfg.scheme = p.scheme;
        const OptimizeResult res = optimize(cfg);
        p.status = res.converged ? "converged" : "max_iters";
        p.asr = res.metrics.asr_clamped;
        p.ahe = res.metrics.ahe * kMwToW;
        p.mean_isee = mean_finite_isee(res.metrics);
      } catch (const InfeasibleMission&) {
        p.status = "infeasible";
      } catch (const InfeasibleHarvest&) {
        p.status = "infeasible";
      } catch (const InfeasibleExpansion&) {
        p.status = "infeasible";
      } catch (const std::exception&) {
        p.status = "error";
      }
      if (p.status != "converged" && p.status != "max_iters") {
        p.asr = p.ahe = p.mean_isee = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream os;
  os << "param,value,scheme,status,asr_bits,ahe_w,mean_isee\n";
  for (const auto& p : points)
    os << param << ',' << format_number(p.value) << ',' << scheme_name(p.scheme)
       << ',' << p.status << ',' << format_number(p.asr) << ','
       << format_number(p.ahe) << ',' << format_number(p.mean_isee) << '\n';
  try {
    write_file(out_dir + "/sweep.csv", os.str());
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace uavsec
