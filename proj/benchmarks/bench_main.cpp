#include <benchmark/benchmark.h>

#include "panic_lab/memstats.hpp"
#include "panic_lab/simengine.hpp"
#include "panic_lab/xsec.hpp"

using namespace panic_lab;

namespace {

sim::SimConfig bench_config() {
  sim::SimConfig c;
  c.n_stocks = 100;
  c.n_steps = 2000;
  c.phase_coupling = 300;
  c.vol_smooth = 3;
  c.seed = 1;
  return c;
}

const sim::SimResult& shared_run() {
  static const auto r = sim::simulate(bench_config(), {});
  return r;
}

}  // namespace

static void BM_Simulate(benchmark::State& state) {
  const auto c = bench_config();
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::simulate(c, {}, threads));
  }
  state.SetItemsProcessed(state.iterations() * c.n_stocks * c.n_steps);
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_VolatilityKernel(benchmark::State& state) {
  const auto c = bench_config();
  const sim::VolatilityKernel kernel(c);
  std::vector<double> hist(static_cast<std::size_t>(c.n_terms) + 1);
  for (std::size_t k = 0; k < hist.size(); ++k) hist[k] = 0.001 * static_cast<double>(k % 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel.variance(hist, c.step_sigma0()));
  }
}
BENCHMARK(BM_VolatilityKernel);

static void BM_XsecSeries(benchmark::State& state) {
  const auto& r = shared_run();
  for (auto _ : state) {
    benchmark::DoNotOptimize(xsec::xsec_series(r.returns));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(r.returns.n_bars()));
}
BENCHMARK(BM_XsecSeries)->Unit(benchmark::kMicrosecond);

static void BM_AicOld(benchmark::State& state) {
  const auto& r = shared_run();
  for (auto _ : state) {
    benchmark::DoNotOptimize(xsec::aic_old(r.returns, 50));
  }
}
BENCHMARK(BM_AicOld)->Unit(benchmark::kMillisecond);

static void BM_Variogram(benchmark::State& state) {
  const auto series = xsec::xsec_series(shared_run().returns).aic;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mem::variogram(series, 100));
  }
}
BENCHMARK(BM_Variogram)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
