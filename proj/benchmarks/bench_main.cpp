#include <benchmark/benchmark.h>

#include <random>

#include <Eigen/Dense>

#include "chainkit/chaining.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/simulate.hpp"
#include "chainkit/verify.hpp"

using namespace chainkit;

namespace {

FiniteMetricSpace cloud(std::size_t n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(n), m);
  for (Eigen::Index i = 0; i < coords.rows(); ++i)
    for (Eigen::Index k = 0; k < m; ++k) coords(i, k) = unit(rng);
  return FiniteMetricSpace::euclidean(coords);
}

void BM_CoverExact(benchmark::State& state) {
  const auto s = cloud(static_cast<std::size_t>(state.range(0)), 2, 1);
  const double eta = s.diameter() / 6;
  for (auto _ : state) benchmark::DoNotOptimize(covering_number_exact(s, eta, kMaxExactPoints));
}
BENCHMARK(BM_CoverExact)->Arg(12)->Arg(24)->Arg(40);

void BM_CoverGreedy(benchmark::State& state) {
  const auto s = cloud(static_cast<std::size_t>(state.range(0)), 2, 1);
  const double eta = s.diameter() / 6;
  for (auto _ : state) benchmark::DoNotOptimize(covering_number_greedy(s, eta));
}
BENCHMARK(BM_CoverGreedy)->Arg(24)->Arg(200)->Arg(1000);

void BM_ChainingFamily(benchmark::State& state) {
  const auto s = uniform_grid(static_cast<std::size_t>(state.range(0)));
  const auto mode = state.range(0) <= 24 ? NetMode::Exact : NetMode::Greedy;
  for (auto _ : state) benchmark::DoNotOptimize(build_chaining_family(s, mode));
}
BENCHMARK(BM_ChainingFamily)->Arg(17)->Arg(33)->Arg(257);

void BM_SimulateBrownian(benchmark::State& state) {
  const auto s = uniform_grid(33);
  const auto R = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_process(s, {ProcessKind::FBM, 0.5}, R, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * R));
}
BENCHMARK(BM_SimulateBrownian)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SupIncrementEstimator(benchmark::State& state) {
  const auto s = uniform_grid(33);
  const auto e = simulate_process(s, {ProcessKind::FBM, 0.5}, 10000, 1);
  const double delta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_sup_increment_moment(s, e, delta, 4.0));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * e.R));
}
BENCHMARK(BM_SupIncrementEstimator)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
