#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chainkit/metric_space.hpp"

namespace chainkit {

/// A covering of a finite space by closed balls of radius `eta` centred at
/// points of the space itself (internal covering).
struct Cover {
  std::size_t count = 0;
  std::vector<std::size_t> centers;  // ascending point indices
  double eta = 0.0;
};

inline constexpr std::size_t kDefaultExactLimit = 24;
/// Hard ceiling of the bitset branch-and-bound.
inline constexpr std::size_t kMaxExactPoints = 64;

enum class NetMode {
  Exact,   ///< minimum covers; TooLarge beyond the exact limit
  Greedy,  ///< greedy max-coverage covers
  Auto,    ///< Exact when the space is small enough, Greedy otherwise
};

/// Minimum internal cover, by branch-and-bound over the set-cover formulation
/// with the greedy cover as incumbent. Deterministic.
Cover covering_number_exact(const FiniteMetricSpace& space, double eta,
                            std::size_t exact_limit = kDefaultExactLimit);

/// Greedy max-coverage cover, ties broken by lowest index.
Cover covering_number_greedy(const FiniteMetricSpace& space, double eta);

Cover covering_number(const FiniteMetricSpace& space, double eta, NetMode mode,
                      std::size_t exact_limit = kDefaultExactLimit);

/// True if every point lies within `eta` of some center.
bool is_cover(const FiniteMetricSpace& space, std::span<const std::size_t> centers, double eta);

/// Constants of the polynomial entropy condition N(eta) <= C * eta^-t on (0, eta_max].
struct EntropyParams {
  double C = 1.0;
  double t = 1.0;
  double eta_max = 0.0;
};

/// Floor for a least-squares exponent that comes out nonpositive or undetermined.
inline constexpr double kMinFittedExponent = 1e-3;

/// Fits (C, t) so that the computed covering numbers are dominated on every
/// grid point. With `t_fixed`, C = max N(eta) * eta^t. Otherwise t is the
/// least-squares slope of log N against -log eta and C is inflated until the
/// bound dominates all grid points. eta_max is set to the space diameter.
EntropyParams fit_entropy_params(const FiniteMetricSpace& space, std::span<const double> eta_grid,
                                 std::optional<double> t_fixed = std::nullopt,
                                 NetMode mode = NetMode::Auto,
                                 std::size_t exact_limit = kDefaultExactLimit);

/// ((diameter + eta) / eta)^m, the volumetric bound on covering numbers of
/// bounded subsets of R^m.
double euclidean_entropy_bound(double diameter, int m, double eta);

/// Two readings of the entropy constant for Euclidean sets with t = m:
/// the literal C = 2*diam and C = (2*diam)^m, which follows from the
/// volumetric bound for eta <= diam.
struct EuclideanEntropyCandidates {
  EntropyParams literal;
  EntropyParams volumetric;
};
EuclideanEntropyCandidates euclidean_entropy_candidates(double diameter, int m);

struct EntropyCheck {
  bool holds = true;
  double worst_ratio = 0.0;  ///< max over the grid of N(eta) / (C eta^-t)
  double witness_eta = 0.0;
  std::size_t witness_count = 0;
};

/// Checks N(eta) <= C eta^-t on every grid point inside (0, eta_max].
EntropyCheck check_entropy(const FiniteMetricSpace& space, const EntropyParams& params,
                           std::span<const double> eta_grid, NetMode mode = NetMode::Auto,
                           std::size_t exact_limit = kDefaultExactLimit);

/// Dyadic radii diameter * 2^-k, k = 0, 1, ..., down to just below min_gap.
std::vector<double> dyadic_eta_grid(const FiniteMetricSpace& space);

}  // namespace chainkit
