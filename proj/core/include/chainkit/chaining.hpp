#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "chainkit/covering.hpp"
#include "chainkit/metric_space.hpp"
#include "chainkit/property_check.hpp"

namespace chainkit {

struct DyadicLevels {
  int n0 = 0;  ///< largest n with diameter <= 2^-n
  int n1 = 0;  ///< smallest n with 2^-n < min_gap
};

/// Throws DegenerateSpace for fewer than two points (zero diameter).
DyadicLevels dyadic_levels(const FiniteMetricSpace& space);

/// Nested dyadic nets Theta_n and projections phi_n : points -> Theta_n for
/// levels n0..n1. phi_{n1} is the identity and phi_{n0} is constant.
class ChainingFamily {
 public:
  ChainingFamily() = default;
  ChainingFamily(int n0, int n1, std::vector<std::vector<std::size_t>> nets,
                 std::vector<std::vector<std::size_t>> maps, NetMode mode);

  int n0() const noexcept { return n0_; }
  int n1() const noexcept { return n1_; }
  NetMode mode() const noexcept { return mode_; }
  std::size_t point_count() const noexcept { return maps_.empty() ? 0 : maps_.front().size(); }

  /// Net Theta_level as ascending point indices.
  const std::vector<std::size_t>& net(int level) const;
  /// phi_level as an array indexed by point.
  const std::vector<std::size_t>& map(int level) const;
  std::size_t phi(int level, std::size_t point) const { return map(level).at(point); }

  /// card(Theta_n) for n = n0..n1.
  std::map<int, std::size_t> net_cardinalities() const;

  bool operator==(const ChainingFamily&) const = default;

 private:
  std::size_t slot(int level) const;

  int n0_ = 0;
  int n1_ = 0;
  std::vector<std::vector<std::size_t>> nets_;
  std::vector<std::vector<std::size_t>> maps_;
  NetMode mode_ = NetMode::Exact;
};

/// Theta_n is a minimum internal 2^-n net (greedy in Greedy mode),
/// pi_n(x) is the nearest point of Theta_n (lowest index on ties), and
/// phi_n = pi_n o phi_{n+1} starting from phi_{n1} = id.
ChainingFamily build_chaining_family(const FiniteMetricSpace& space, NetMode mode = NetMode::Exact,
                                     std::size_t exact_limit = kDefaultExactLimit);

/// Checks the structural chaining properties. Property names:
/// level_order, net_cardinality, net_covering, identity, link_distance,
/// link_cardinality, projection_distance, plus maps_into_nets for index
/// consistency. net_cardinality compares against exact covering numbers when
/// `exact_cardinality` is set, otherwise against greedy counts as an upper bound.
PropertyReport validate_family(const FiniteMetricSpace& space, const ChainingFamily& family,
                               bool exact_cardinality = true,
                               std::size_t exact_limit = kDefaultExactLimit);

/// phi_level(x), phi_{level+1}(x), ..., phi_{n1}(x) = x.
/// Throws LevelOutOfRange unless n0 <= level <= n1 - 1.
std::vector<std::size_t> chain_decompose(const ChainingFamily& family, std::size_t point, int level);

}  // namespace chainkit
