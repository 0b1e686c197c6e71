#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "ceap/condensed_density.hpp"
#include "ceap/hankel_pencil.hpp"
#include "ceap/prony.hpp"
#include "ceap/ptransform.hpp"

namespace {

using ceap::Complex;

// Five damped tones plus complex Gaussian noise.
ceap::SignalSeries test_series(std::size_t n, double sigma) {
  std::vector<ceap::Term> terms;
  for (int j = 0; j < 5; ++j)
    terms.push_back({{1.0 - 0.15 * j, 0.1 * j}, std::polar(0.97 - 0.01 * j, -2.5 + 1.1 * j)});
  std::vector<Complex> s = ceap::evaluate_model(ceap::ExponentialModel(terms), 0, n);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> g(0.0, sigma / std::sqrt(2.0));
  for (Complex& v : s) v += Complex{g(gen), g(gen)};
  return ceap::SignalSeries(std::move(s), sigma);
}

void BM_SolvePencil(benchmark::State& state) {
  const auto series = test_series(static_cast<std::size_t>(state.range(0)), 1e-3);
  const auto pencil = ceap::build_pencil(series);
  for (auto _ : state) benchmark::DoNotOptimize(ceap::solve_pencil(pencil, series));
}
BENCHMARK(BM_SolvePencil)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_FastCeip(benchmark::State& state) {
  const auto series = test_series(static_cast<std::size_t>(state.range(0)), 1e-3);
  const auto warm = ceap::truncate_by_weight(
      ceap::solve_pencil(ceap::build_pencil(series), series), 8);
  for (auto _ : state) benchmark::DoNotOptimize(ceap::fast_ceip(series, warm, 8));
}
BENCHMARK(BM_FastCeip)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_PTransform(benchmark::State& state) {
  const auto series = test_series(64, 1e-3);
  ceap::PseudosampleConfig cfg;
  cfg.replications = static_cast<std::size_t>(state.range(0));
  cfg.sigma_prime = 1e-3;
  cfg.p_tilde = 8;
  cfg.path = state.range(1) ? ceap::SolverPath::kSlow : ceap::SolverPath::kFast;
  for (auto _ : state) benchmark::DoNotOptimize(ceap::ptransform_estimate(series, cfg));
}
BENCHMARK(BM_PTransform)
    ->ArgNames({"R", "slow"})
    ->Args({32, 0})
    ->Args({32, 1})
    ->Args({128, 0})
    ->Args({128, 1})
    ->Unit(benchmark::kMillisecond);

void BM_DensityMap(benchmark::State& state) {
  const auto series = test_series(static_cast<std::size_t>(state.range(0)), 1e-2);
  ceap::Lattice lattice;
  lattice.nx = lattice.ny = 81;
  for (auto _ : state) benchmark::DoNotOptimize(ceap::condensed_density_map(series, lattice));
}
BENCHMARK(BM_DensityMap)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
