#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chainkit/simulate.hpp"
#include "chainkit/verify.hpp"
#include "support/stats_oracle.hpp"

using namespace chainkit;

namespace {

// Brownian motion on {0, 1/2, 1} from an unrelated generator.
PathEnsemble mt_brownian(std::size_t R, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  PathEnsemble e;
  e.R = R;
  e.n = 3;
  e.values.resize(R * 3);
  for (std::size_t r = 0; r < R; ++r) {
    const double a = std::sqrt(0.5) * z(rng);
    e.values[r * 3] = 0.0;
    e.values[r * 3 + 1] = a;
    e.values[r * 3 + 2] = a + std::sqrt(0.5) * z(rng);
  }
  return e;
}

double sup_sq(const PathEnsemble& e, std::size_t r) {
  const double x0 = e.value(r, 0), x1 = e.value(r, 1), x2 = e.value(r, 2);
  const double m = std::max({std::abs(x1 - x0), std::abs(x2 - x1), std::abs(x2 - x0)});
  return m * m;
}

}  // namespace

TEST(StatsOracle, EstimatorMatchesDirectComputation) {
  const auto s = uniform_grid(3);
  const auto e = mt_brownian(20000, 3);
  std::vector<double> direct(e.R);
  for (std::size_t r = 0; r < e.R; ++r) direct[r] = sup_sq(e, r);
  const auto ref = oracle::mean_se(direct);
  const auto got = estimate_sup_increment_moment(s, e, 1.0, 2.0);
  EXPECT_NEAR(got.estimate.mean, ref.mean, 1e-12 * ref.mean);
  EXPECT_NEAR(got.estimate.std_error, ref.se, 1e-9 * ref.se);
}

TEST(StatsOracle, LibrarySimulationAgreesWithIndependentGenerator) {
  const auto s = uniform_grid(3);
  const auto ref_ens = mt_brownian(1000000, 17);
  std::vector<double> direct(ref_ens.R);
  for (std::size_t r = 0; r < ref_ens.R; ++r) direct[r] = sup_sq(ref_ens, r);
  const auto ref = oracle::mean_se(direct);
  const auto lib = simulate_process(s, {ProcessKind::FBM, 0.5}, 200000, 5);
  const auto got = estimate_sup_increment_moment(s, lib, 1.0, 2.0).estimate;
  const double se = std::hypot(ref.se, got.std_error);
  EXPECT_LT(std::abs(got.mean - ref.mean), 5.0 * se) << got.mean << " vs " << ref.mean;
}

TEST(StatsOracle, KsDistanceMatchesReference) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 2.0);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = z(rng);
  std::vector<double> scaled = xs;
  for (auto& x : scaled) x /= 2.0;
  EXPECT_NEAR(ks_distance_normal(xs, 2.0), oracle::ks_normal(scaled), 1e-12);
}
