#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "chainkit/error.hpp"
#include "chainkit/simulate.hpp"
#include "chainkit/verify.hpp"
#include "support/random_spaces.hpp"

using namespace chainkit;
using chainkit::test_support::line;

namespace {

double sample_variance_of_increment(const PathEnsemble& e, std::size_t i, std::size_t j) {
  double s = 0, s2 = 0;
  for (std::size_t r = 0; r < e.R; ++r) {
    const double d = e.value(r, i) - e.value(r, j);
    s += d;
    s2 += d * d;
  }
  const double m = s / e.R;
  return (s2 - e.R * m * m) / (e.R - 1);
}

}  // namespace

TEST(GaussianMoment, Values) {
  EXPECT_NEAR(gaussian_abs_moment(2), 1.0, 1e-14);
  EXPECT_NEAR(gaussian_abs_moment(4), 3.0, 1e-13);
  EXPECT_NEAR(gaussian_abs_moment(1), std::sqrt(2.0 / std::numbers::pi), 1e-14);
  EXPECT_NEAR(gaussian_abs_moment(6), 15.0, 1e-12);
}

TEST(Certificate, Kinds) {
  const auto bm = certificate_for({ProcessKind::FBM, 0.5}, 4);
  EXPECT_NEAR(bm.M, 3.0, 1e-13);
  EXPECT_DOUBLE_EQ(bm.q, 2.0);
  EXPECT_TRUE(bm.exact);
  const auto fbm = certificate_for({ProcessKind::FBM, 0.7}, 2);
  EXPECT_DOUBLE_EQ(fbm.q, 1.4);
  const auto chi = certificate_for({ProcessKind::Chi2Ramp, 0.5}, 4);
  // E(Z^2 - 1)^4 = 60, divided by 2^2.
  EXPECT_DOUBLE_EQ(chi.M, 15.0);
  EXPECT_DOUBLE_EQ(certificate_for({ProcessKind::Chi2Ramp, 0.5}, 2).M, 1.0);
  EXPECT_FALSE(chi.exact);
  EXPECT_THROW((void)certificate_for({ProcessKind::Chi2Ramp, 0.5}, 3), Error);
}

TEST(FbmField, BrownianIncrementVarianceAndPinning) {
  const auto s = line({0.0, 0.5, 1.0});
  const auto sim = simulate_fbm_field(s, 0.5, 100000, 123, 2.0);
  const auto& e = sim.ensemble;
  for (std::size_t r = 0; r < e.R; ++r) ASSERT_EQ(e.value(r, 0), 0.0);
  const double tol = 3.0 / std::sqrt(static_cast<double>(e.R)) * std::sqrt(2.0);
  EXPECT_NEAR(sample_variance_of_increment(e, 2, 1) / 0.5, 1.0, tol);
  EXPECT_NEAR(sample_variance_of_increment(e, 2, 0) / 1.0, 1.0, tol);
  EXPECT_NEAR(sim.certificate.M, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(sim.certificate.q, 1.0);
}

TEST(FbmField, FractionalIncrementVariance) {
  const auto s = uniform_grid(9);
  const double H = 0.3;
  const auto sim = simulate_fbm_field(s, H, 50000, 9, 2.0);
  const double tol = 3.0 / std::sqrt(50000.0) * std::sqrt(2.0);
  for (auto [i, j] : {std::pair{0, 8}, {3, 4}, {1, 6}}) {
    const double d = s.distance(i, j);
    EXPECT_NEAR(sample_variance_of_increment(sim.ensemble, i, j) / std::pow(d, 2 * H), 1.0, tol) << i << "," << j;
  }
}

TEST(FbmField, CovarianceFactorReproducesCovariance) {
  const auto s = uniform_grid(17);
  const GaussianFieldSampler sampler(s, 0.5);
  const Eigen::MatrixXd rebuilt = sampler.factor() * sampler.factor().transpose();
  EXPECT_LT((rebuilt - sampler.covariance()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(sampler.jitter(), 0.0);
}

TEST(FbmField, TwoDimensionalLevyField) {
  Eigen::MatrixXd c(4, 2);
  c << 0.1, 0.2, 0.5, 0.5, 0.9, 0.1, 0.3, 0.8;
  const auto s = FiniteMetricSpace::euclidean(c);
  const auto sim = simulate_fbm_field(s, 0.5, 40000, 3);
  const double tol = 4.0 / std::sqrt(40000.0) * std::sqrt(2.0);
  EXPECT_NEAR(sample_variance_of_increment(sim.ensemble, 0, 2) / s.distance(0, 2), 1.0, tol);
}

TEST(FbmField, Errors) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  const auto abstract = FiniteMetricSpace::from_matrix({}, d);
  EXPECT_THROW((void)simulate_fbm_field(abstract, 0.5, 10, 1), Error);
  EXPECT_THROW((void)simulate_fbm_field(uniform_grid(3), 1.5, 10, 1), Error);
}

TEST(Simulate, ReproducibleAndThreadIndependent) {
  const auto s = uniform_grid(9);
  const ProcessSpec bm{ProcessKind::FBM, 0.5};
  ::setenv("CHAINKIT_THREADS", "1", 1);
  const auto a = simulate_process(s, bm, 1000, 77);
  ::setenv("CHAINKIT_THREADS", "4", 1);
  const auto b = simulate_process(s, bm, 1000, 77);
  ::unsetenv("CHAINKIT_THREADS");
  EXPECT_EQ(a.values, b.values);
  const auto c = simulate_process(s, bm, 1000, 78);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.space_id, s.fingerprint());
}

TEST(PartialSums, SingleSummandMatchesBaseLawAndVarianceIdentity) {
  const auto s = line({0.0, 0.25, 1.0});
  const std::vector<std::size_t> ns{1, 5, 25};
  const auto sums = simulate_partial_sums(s, {ProcessKind::FBM, 0.5}, ns, 40000, 5);
  ASSERT_EQ(sums.size(), 3u);
  const double tol = 3.0 / std::sqrt(40000.0) * std::sqrt(2.0);
  for (const auto& [n, e] : sums) {
    EXPECT_EQ(e.summands, n);
    EXPECT_NEAR(sample_variance_of_increment(e, 2, 1) / 0.75, 1.0, tol) << n;
  }
  // Each n has its own stream family, so ensembles for different n differ.
  EXPECT_NE(sums.at(1).values, sums.at(5).values);
}

TEST(PartialSums, Chi2RampApproachesNormal) {
  const auto s = line({0.0, 1.0});
  const std::vector<std::size_t> ns{1, 5, 25, 125};
  const auto sums = simulate_partial_sums(s, {ProcessKind::Chi2Ramp, 0.5}, ns, 20000, 8);
  double prev = 1.0;
  for (std::size_t n : ns) {
    std::vector<double> at_one(20000);
    for (std::size_t r = 0; r < 20000; ++r) at_one[r] = sums.at(n).value(r, 1);
    const double ks = ks_distance_normal(at_one);
    EXPECT_LT(ks, prev) << "n = " << n;
    prev = ks;
  }
}

TEST(PartialSums, StreamIds) {
  EXPECT_EQ(partial_sum_stream(1, 0), std::uint64_t{1} << 40);
  EXPECT_NE(partial_sum_stream(4, 7), partial_sum_stream(7, 4));
}
