#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "chainkit/error.hpp"
#include "chainkit/pair_reduction.hpp"
#include "support/random_spaces.hpp"

using namespace chainkit;
using chainkit::test_support::line;

namespace {
using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;
}

TEST(PairReduction, TwoPointTrace) {
  const auto s = line({0.0, 1.0});
  const auto red = build_pair_set(s, 2.0, 1, 1.0);
  ASSERT_EQ(red.trace.size(), 2u);
  EXPECT_EQ(red.trace[0].center, 0u);
  EXPECT_EQ(red.trace[0].radius_multiple, 1);
  EXPECT_EQ(red.trace[0].removed, 1u);
  EXPECT_EQ(red.trace[1].center, 1u);
  EXPECT_EQ(red.trace[1].radius_multiple, 1);
  EXPECT_EQ(red.pairs, (Pairs{{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_TRUE(validate_reduction(s, red).all_pass());
}

TEST(PairReduction, Singleton) {
  const auto s = line({0.25});
  const auto red = build_pair_set(s, 2.0, 1, 1.0);
  EXPECT_EQ(red.trace.size(), 1u);
  EXPECT_EQ(red.pairs, (Pairs{{0, 0}}));
}

TEST(PairReduction, WideScaleFirstStepPairsWithEveryPoint) {
  // r_1 = 1 removes only points within (r_1 - 1) c = 0 of theta_1, so the
  // peel continues one point at a time; the first step already pairs
  // theta_1 with every point.
  const auto s = line({0.0, 0.2, 0.5, 0.9});
  const auto red = build_pair_set(s, 4.0, 1, 1.0);
  ASSERT_EQ(red.trace.size(), 4u);
  for (const auto& step : red.trace) {
    EXPECT_EQ(step.radius_multiple, 1);
    EXPECT_EQ(step.removed, 1u);
  }
  EXPECT_EQ(red.pairs.size(), 4u + 3u + 2u + 1u);
  EXPECT_EQ(std::count_if(red.pairs.begin(), red.pairs.end(), [](const auto& p) { return p.first == 0; }), 4);
  EXPECT_LE(red.pairs.size(), 4u * 4u);
  EXPECT_TRUE(validate_reduction(s, red).all_pass());
}

TEST(PairReduction, BadParameters) {
  const auto s = line({0.0, 0.5, 1.0});
  for (auto f : {+[](const FiniteMetricSpace& sp) { (void)build_pair_set(sp, 2.0, 1, 0.5); },
                 +[](const FiniteMetricSpace& sp) { (void)build_pair_set(sp, 0.5, 4, 0.5); },
                 +[](const FiniteMetricSpace& sp) { (void)build_pair_set(sp, 2.0, 2, 0.0); },
                 +[](const FiniteMetricSpace& sp) { (void)build_pair_set(sp, 2.0, 0, 0.5); }}) {
    try {
      f(s);
      ADD_FAILURE() << "expected BadParameters";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadParameters);
    }
  }
}

TEST(Domination, ConstantAndTwoPointValues) {
  const auto s = line({0.0, 1.0});
  const auto red = build_pair_set(s, 2.0, 1, 1.0);
  const std::vector<double> flat{3.0, 3.0};
  const auto a = check_domination(s, red, flat, 1, 1.0);
  EXPECT_EQ(a.lhs, 0.0);
  EXPECT_EQ(a.rhs, 0.0);
  EXPECT_TRUE(a.pass);
  const std::vector<double> step{0.0, 5.0};
  const auto b = check_domination(s, red, step, 1, 1.0);
  EXPECT_EQ(b.lhs, 5.0);
  EXPECT_EQ(b.rhs, 10.0);
  EXPECT_TRUE(b.pass);
}

TEST(Domination, MissingValues) {
  const auto s = line({0.0, 1.0});
  const auto red = build_pair_set(s, 2.0, 1, 1.0);
  const std::vector<double> short_path{1.0};
  try {
    (void)check_domination(s, red, short_path, 1, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingValue);
  }
}

TEST(PairReductionProperty, RandomInstancesAndValues) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = chainkit::test_support::random_cloud(rng).space;
    const int r = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(s.size())))));
    for (double c : {s.diameter() / 2, s.diameter() / 8, s.min_gap()}) {
      const auto red = build_pair_set(s, 2.0, r, c);
      const auto report = validate_reduction(s, red);
      for (const char* name : {"cardinality", "pair_diameter", "peel_budget", "strict_peeling"}) {
        const auto* check = report.find(name);
        ASSERT_NE(check, nullptr) << name;
        EXPECT_TRUE(check->pass) << name << ": " << check->detail;
      }
      EXPECT_EQ(build_pair_set(s, 2.0, r, c).pairs, red.pairs);
      for (int v = 0; v < 20; ++v) {
        std::vector<double> values(s.size() * 2);
        for (auto& x : values) x = (v % 2) ? z(rng) : u(rng);
        EXPECT_TRUE(check_domination(s, red, values, 2, c).pass);
      }
    }
  }
}

TEST(PairReductionProperty, SupportSubset) {
  const auto s = uniform_grid(17);
  const std::vector<std::size_t> support{0, 4, 8, 12, 16};
  const auto red = build_pair_set(s, support, 2.0, 3, 0.25);
  EXPECT_EQ(red.support, support);
  for (const auto& [a, b] : red.pairs) {
    EXPECT_EQ(a % 4, 0u);
    EXPECT_EQ(b % 4, 0u);
  }
  EXPECT_TRUE(validate_reduction(s, red).all_pass());
}
