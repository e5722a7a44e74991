#ifndef UAVSEC_PLANNER_HPP
#define UAVSEC_PLANNER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uavsec/power_jammer.hpp"
#include "uavsec/power_source.hpp"
#include "uavsec/rates.hpp"
#include "uavsec/trajectory.hpp"

namespace uavsec {

/// The mission cannot be flown or powered at all: endpoints unreachable in N
/// steps, harvest floor unattainable, or the flying zone exceeds the Eq.-(16)
/// style power-outage radius.
struct InfeasibleMission : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything the optimizer needs for one mission. All powers in mW,
/// distances in the common distance unit of the geometry.
struct MissionConfig {
  Scheme scheme = Scheme::FUJ;
  std::size_t n_slots = 100;
  double mission_time_s = 2.0;
  Geometry geo;
  ChannelParams ch;
  Position2D q_si, q_sf;  // source endpoints
  Position2D q_ji, q_jf;  // jammer endpoints
  double d_step = 0.12;   // max per-slot displacement
  PowerBudget budget_s, budget_j;
  double psi_h = 0.01;  // minimum harvested power, mW
  double eta = 0.7;
  double epsilon = 1e-2;  // BCD stop threshold on |delta ASR|, bits
  int max_bcd_iters = 100;
  SolverOptions solver;
  JammerSolveOptions jammer;
  std::uint64_t seed = 0;
};

/// Maximum zone radius that keeps every point of the zone energy-viable at
/// the peak network transmit power: sqrt((P_R_hat beta/Psi)^(2/alpha) - H^2).
double feasibility_radius(const MissionConfig& cfg);

/// Throws on inconsistent or infeasible configurations; warns (stderr) on
/// soft modelling violations such as d_step > H/2.
void validate_config(const MissionConfig& cfg);

/// Greedy feasible paths: fly at max speed towards the loiter point
/// (destination for the source, estimated eavesdropper for the jammer),
/// hover as long as the remaining time allows, then head for the terminal
/// position; turns midway when the mission time is too short to arrive.
std::pair<std::vector<Position2D>, std::vector<Position2D>> baseline_trajectory(
    const MissionConfig& cfg);

/// Algorithm 1 line 1: baseline paths, uniform average powers lifted to the
/// harvesting floors where needed, and the closed-form optimal split.
Plan initialize(const MissionConfig& cfg);

/// Unclamped ASR deltas (bits) contributed by each block of one iteration.
struct BlockDeltas {
  double source_power = 0.0;
  double jammer_power = 0.0;
  double psr = 0.0;
  double source_traj = 0.0;
  double jammer_traj = 0.0;
  double total() const {
    return source_power + jammer_power + psr + source_traj + jammer_traj;
  }
};

/// One pass of Algorithm 1 lines 4-8 over the five blocks in order. The
/// jammer blocks are skipped for WoJ.
BlockDeltas bcd_iterate(Plan& plan, const MissionConfig& cfg);

enum class StopReason { Epsilon, MaxIters };

struct ConvergenceTrace {
  std::vector<double> asr;  // unclamped ASR, bits; asr[0] is initialization
  std::vector<BlockDeltas> deltas;
  int iterations = 0;
  StopReason reason = StopReason::MaxIters;
};

struct OptimizeResult {
  Plan plan;
  ConvergenceTrace trace;
  RateMetrics metrics;
  bool converged = false;
};

/// The full Algorithm 1 loop: iterate until |delta ASR| < epsilon or the
/// iteration cap. A cap exit is flagged, not fatal.
OptimizeResult optimize(const MissionConfig& cfg);

struct Violation {
  std::string constraint;  // "C1" .. "C15"
  std::size_t slot = 0;
  double magnitude = 0.0;
};

/// Empty iff C1-C15 all hold within 1e-9 absolute slack.
std::vector<Violation> validate(const Plan& plan, const MissionConfig& cfg);

}  // namespace uavsec

#endif
