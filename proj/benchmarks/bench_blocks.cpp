#include <benchmark/benchmark.h>

#include "uavsec/config.hpp"
#include "uavsec/planner.hpp"
#include "uavsec/power_source.hpp"
#include "uavsec/psr.hpp"

namespace {

uavsec::MissionConfig small_config(std::size_t n) {
  uavsec::MissionConfig cfg = uavsec::default_config();
  cfg.n_slots = n;
  cfg.budget_s.p_avg = 50.0 / static_cast<double>(n);
  cfg.budget_s.p_peak = 4.0 * cfg.budget_s.p_avg;
  cfg.budget_j = cfg.budget_s;
  return cfg;
}

void BM_SourcePowerBlock(benchmark::State& state) {
  const auto cfg = small_config(static_cast<std::size_t>(state.range(0)));
  uavsec::Plan plan = uavsec::initialize(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(uavsec::solve_source_power(
        plan, cfg.scheme, cfg.geo, cfg.ch, cfg.eta, cfg.budget_s, cfg.psi_h));
  }
}
BENCHMARK(BM_SourcePowerBlock)->Arg(25)->Arg(50)->Arg(100);

void BM_PsrBlock(benchmark::State& state) {
  const auto cfg = small_config(static_cast<std::size_t>(state.range(0)));
  uavsec::Plan plan = uavsec::initialize(cfg);
  for (auto _ : state) {
    for (std::size_t i = 0; i < plan.slots(); ++i) {
      benchmark::DoNotOptimize(uavsec::optimal_psr(
          uavsec::psr_constants(plan.slot(i), cfg.scheme, cfg.geo, cfg.ch),
          cfg.eta, cfg.psi_h));
    }
  }
}
BENCHMARK(BM_PsrBlock)->Arg(25)->Arg(50)->Arg(100);

void BM_BcdIteration(benchmark::State& state) {
  const auto cfg = small_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    uavsec::Plan plan = uavsec::initialize(cfg);
    benchmark::DoNotOptimize(uavsec::bcd_iterate(plan, cfg));
  }
}
BENCHMARK(BM_BcdIteration)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
