#include <benchmark/benchmark.h>

#include <random>

#include "cavspec/analysis.hpp"
#include "cavspec/dynamics.hpp"
#include "cavspec/modes.hpp"
#include "cavspec/response.hpp"

using namespace cavspec;

namespace {

SystemConfig demo_config(int points) {
  SystemConfig cfg;
  cfg.ladder = build_from_splittings(5.0, 10.0, {1, 1, 1});
  cfg.coupling = CollectiveCoupling::uniform(4.3, 3);
  cfg.cavity = {2.0, 0.0, 1.0};
  cfg.grid = {-30.0, 20.0, points};
  return cfg;
}

ModeMatrix random_arrowhead(std::mt19937_64& rng, std::size_t leaves) {
  std::uniform_real_distribution<double> leafd(-25.0, 25.0), wd(0.1, 10.0), hubd(-30.0, 30.0);
  ModeMatrix m;
  m.diagonal.resize(leaves);
  for (auto& d : m.diagonal) d = leafd(rng);
  std::sort(m.diagonal.begin(), m.diagonal.end());
  m.diagonal.push_back(hubd(rng));
  m.border.resize(leaves);
  for (auto& w : m.border) w = wd(rng);
  return m;
}

void BM_ScanSpectrum(benchmark::State& state) {
  const auto cfg = demo_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_spectrum(cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScanSpectrum)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Eigenmodes(benchmark::State& state) {
  std::mt19937_64 rng(42);
  const auto m = random_arrowhead(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigenmodes(m));
  }
}
BENCHMARK(BM_Eigenmodes)->Arg(3)->Arg(16)->Arg(64);

void BM_PolyRoots(benchmark::State& state) {
  std::mt19937_64 rng(43);
  const auto m = random_arrowhead(rng, 3);
  const auto p = characteristic_polynomial(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poly_roots(p));
  }
}
BENCHMARK(BM_PolyRoots);

void BM_SteadyState(benchmark::State& state) {
  const auto sys = linear_system(demo_config(11), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(steady_state(sys));
  }
}
BENCHMARK(BM_SteadyState);

void BM_FindPeaks(benchmark::State& state) {
  const auto s = scan_spectrum(demo_config(10000));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_peaks(s));
  }
}
BENCHMARK(BM_FindPeaks);

}  // namespace

BENCHMARK_MAIN();
