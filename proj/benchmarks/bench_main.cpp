#include <benchmark/benchmark.h>

#include "dram3d/circuit_sim.hpp"
#include "dram3d/model_config.hpp"

using namespace dram3d;

static void BM_BitlineTransient(benchmark::State& state) {
  ArrayConfig c;
  c.profile = builtin_profile("si3d");
  c.topology.scheme = state.range(1) ? Scheme::bl_strap : Scheme::selector_strap;
  c.n_layers = static_cast<int>(state.range(0));
  const auto op = operating_point(c.profile, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulated_sense_margin(c, op));
}
BENCHMARK(BM_BitlineTransient)->Args({10, 0})->Args({137, 0})->Args({137, 1})->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
  const auto cfg = default_config();
  const auto in = inputs_for(cfg, {"si3d", 10, std::nullopt});
  for (auto _ : state) benchmark::DoNotOptimize(sweep(in, {10, 200, 1}));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMicrosecond);

static void BM_ReferenceCalibration(benchmark::State& state) {
  const auto cfg = default_config();
  for (auto _ : state) benchmark::DoNotOptimize(calibrate(cfg, cfg.calibration));
}
BENCHMARK(BM_ReferenceCalibration)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
