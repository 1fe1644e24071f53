#include <gtest/gtest.h>

#include "chainkit/covering.hpp"
#include "support/naive_cover.hpp"
#include "support/random_spaces.hpp"

using namespace chainkit;

TEST(CoverOracle, ExactMatchesExhaustiveSearch) {
  std::size_t instances = 0;
  for (const auto& cloud : test_support::random_corpus()) {
    const auto& s = cloud.space;
    if (s.size() > 12) continue;
    auto etas = dyadic_eta_grid(s);
    etas.push_back(s.min_gap());
    etas.push_back(0.37 * s.diameter());
    for (double eta : etas) {
      const auto exact = covering_number_exact(s, eta);
      EXPECT_EQ(exact.count, oracle::naive_covering_number(s, eta)) << "n=" << s.size() << " eta=" << eta;
      EXPECT_GE(covering_number_greedy(s, eta).count, exact.count);
      ++instances;
    }
  }
  EXPECT_GT(instances, 100u);
}

TEST(CoverOracle, LargerRandomLines) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    std::vector<double> xs(16);
    for (auto& x : xs) x = unit(rng);
    const auto s = test_support::line(xs);
    for (double eta : {0.02, 0.05, 0.1, 0.2})
      EXPECT_EQ(covering_number_exact(s, eta).count, oracle::naive_covering_number(s, eta));
  }
}
