#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "chainkit/metric_space.hpp"
#include "chainkit/property_check.hpp"

namespace chainkit {

/// One peeling step: centre theta_l, radius multiple r_l and how many points
/// left V_l in this step.
struct PeelStep {
  std::size_t step = 0;  ///< 1-based l
  std::size_t center = 0;
  int radius_multiple = 0;
  std::size_t removed = 0;
};

/// A small pair set U over a subset of the space such that every increment
/// between points at distance <= c is at most twice the largest increment
/// over U.
struct PairReduction {
  double A = 2.0;
  int r = 1;
  double c = 1.0;
  std::vector<std::size_t> support;  ///< points the reduction was built on, ascending
  std::vector<PeelStep> trace;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Peels V_1 = support: theta_l is the lowest index left, r_l the smallest
/// s in 1..r with card{x in V_l : d(x, theta_l) <= s c} <= A^s, the pairs
/// (theta_l, x) with d <= c r_l go into U, and V_{l+1} keeps the points with
/// d(x, theta_l) > (r_l - 1) c. Throws BadParameters unless A >= 1, c > 0,
/// r >= 1 and A^r >= card(support).
PairReduction build_pair_set(const FiniteMetricSpace& space, double A, int r, double c);
PairReduction build_pair_set(const FiniteMetricSpace& space, std::span<const std::size_t> support,
                             double A, int r, double c);

/// Checks cardinality, pair_diameter, peel_budget (1 <= r_l <= r and
/// sum A^{r_l} <= A card) and strict_peeling.
PropertyReport validate_reduction(const FiniteMetricSpace& space, const PairReduction& reduction);

struct DominationCheck {
  double lhs = 0.0;  ///< sup over support pairs with d <= c of the value distance
  double rhs = 0.0;  ///< 2 sup over U of the value distance
  bool pass = true;
};

/// `values` holds one path (n points times `dim` components). Throws
/// MissingValue if it is shorter than the space.
DominationCheck check_domination(const FiniteMetricSpace& space, const PairReduction& reduction,
                                 std::span<const double> values, std::size_t dim, double c);

}  // namespace chainkit
