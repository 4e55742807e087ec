// SPDX-License-Identifier: Apache-2.0
//
// ristrack: RIS-assisted beam tracking with Bayesian optimization
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>

#include "ristrack/acquisition.hpp"
#include "ristrack/tracker.hpp"

namespace {

using namespace ristrack;

const Scenario &scenario() {
  static const Scenario s = [] {
    SceneConfig scene;
    return Scenario(scene, RisGeometry::half_wavelength(scene.wavelength()), GridMap{});
  }();
  return s;
}

ObservationHistory random_history(std::size_t n, std::uint64_t seed) {
  const auto &domain = scenario().domain();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(domain.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> db(-90.0, -50.0);
  ObservationHistory h;
  for (std::size_t i = 0; i < n; ++i) h.add(order[i], domain[order[i]], db(rng));
  return h;
}

void BM_BuildCodebook(benchmark::State &state) {
  SceneConfig scene;
  const RisGeometry ris = RisGeometry::half_wavelength(scene.wavelength());
  const GridMap grid;
  for (auto _ : state) benchmark::DoNotOptimize(build_codebook(scene, ris, grid));
}
BENCHMARK(BM_BuildCodebook)->Unit(benchmark::kMillisecond);

void BM_GpFitAndSelect(benchmark::State &state) {
  const ObservationHistory h = random_history(static_cast<std::size_t>(state.range(0)), 1);
  const auto &domain = scenario().domain();
  for (auto _ : state) {
    const GpModel m = gp_fit(h);
    benchmark::DoNotOptimize(select_next(domain, m, h));
  }
}
BENCHMARK(BM_GpFitAndSelect)->Arg(5)->Arg(20)->Arg(60);

void BM_TpeFitAndSelect(benchmark::State &state) {
  const ObservationHistory h = random_history(static_cast<std::size_t>(state.range(0)), 2);
  const auto &domain = scenario().domain();
  for (auto _ : state) {
    const TpeModel m = tpe_fit(h, domain);
    benchmark::DoNotOptimize(select_next(domain, m, h));
  }
}
BENCHMARK(BM_TpeFitAndSelect)->Arg(5)->Arg(20)->Arg(60);

void BM_TrackSlot(benchmark::State &state) {
  TrackerConfig config;
  config.method = static_cast<Method>(state.range(0));
  config.overhead = 0.4;
  config.record_timing = false;
  const SlotEnvironment env = SlotEnvironment::at_cell(scenario(), {4, 6});
  std::mt19937_64 rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(track_slot(env, config, rng));
  state.SetLabel(std::string(method_name(config.method)));
}
BENCHMARK(BM_TrackSlot)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
