#ifndef UAVSEC_REPORT_HPP
#define UAVSEC_REPORT_HPP

#include <string>
#include <vector>

#include "uavsec/config.hpp"
#include "uavsec/planner.hpp"

namespace uavsec {

/// Everything the reporting layer writes for one mission run.
struct RunReport {
  MissionConfig cfg;
  Plan plan;
  RateMetrics metrics;
  ConvergenceTrace trace;
  bool converged = false;
  bool baseline_only = false;
};

/// Renders a double with 12 significant digits, locale-independent.
std::string format_number(double v);

RunReport make_report(const MissionConfig& cfg, const OptimizeResult& result);

/// slots.csv / trace.csv / summary.txt bodies (deterministic bytes).
std::string slots_csv(const RunReport& r);
std::string trace_csv(const RunReport& r);
std::string summary_text(const RunReport& r);

/// Runs one mission and writes the three artifacts into out_dir.
/// Exit codes: 0 converged, 2 iteration-cap exit (flagged), 1 infeasible.
int run_mission(const MissionConfig& cfg, const std::string& out_dir,
                bool baseline_only = false);

struct SweepPoint {
  double value = 0.0;
  Scheme scheme = Scheme::FUJ;
  std::string status;  // converged | max_iters | infeasible
  double asr = 0.0;    // clamped ASR, bits
  double ahe = 0.0;    // mean harvested power, W
  double mean_isee = 0.0;
};

/// Applies one sweep parameter (eve_radius, eve_distance, mission_time) to a
/// base configuration. mission_time keeps the implied max speed fixed by
/// scaling d_step with T.
MissionConfig apply_sweep_param(const MissionConfig& base, const std::string& param,
                                double value);

/// Runs value x scheme missions (workers in parallel) and writes sweep.csv.
/// Per-point failures land in the status column; the sweep continues.
int run_sweep(const MissionConfig& base, const std::string& param,
              const std::vector<double>& values, const std::vector<Scheme>& schemes,
              const std::string& out_dir, int workers);

}  // namespace uavsec

#endif
