#include "chainkit/covering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "covering";

void require_positive_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw Error(ErrorKind::BadParameters, kModule, "eta must be positive and finite");
}

using Mask = std::uint64_t;

class SetCoverSearch {
 public:
  SetCoverSearch(std::vector<Mask> balls, std::vector<std::size_t> incumbent)
      : balls_(std::move(balls)), best_(std::move(incumbent)) {}

  std::vector<std::size_t> run(Mask universe) {
    chosen_.clear();
    search(universe);
    return best_;
  }

 private:
  void search(Mask uncovered) {
    if (uncovered == 0) {
      if (chosen_.size() < best_.size()) best_ = chosen_;
      return;
    }
    int widest = 0;
    for (const Mask b : balls_) widest = std::max(widest, std::popcount(b & uncovered));
    const std::size_t lower = (static_cast<std::size_t>(std::popcount(uncovered)) + widest - 1) / widest;
    if (chosen_.size() + lower >= best_.size()) return;

    // Branch on the uncovered point with the fewest balls containing it. By
    // symmetry of the metric those balls are centred at points of balls_[u].
    std::size_t pivot = 0;
    int fewest = std::numeric_limits<int>::max();
    for (Mask m = uncovered; m != 0; m &= m - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(m));
      const int options = std::popcount(balls_[u]);
      if (options < fewest) {
        fewest = options;
        pivot = u;
      }
    }
    for (Mask m = balls_[pivot]; m != 0; m &= m - 1) {
      const auto c = static_cast<std::size_t>(std::countr_zero(m));
      chosen_.push_back(c);
      search(uncovered & ~balls_[c]);
      chosen_.pop_back();
    }
  }

  std::vector<Mask> balls_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

bool is_cover(const FiniteMetricSpace& space, std::span<const std::size_t> centers, double eta) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    const bool hit = std::any_of(centers.begin(), centers.end(),
                                 [&](std::size_t c) { return space.distance(i, c) <= eta; });
    if (!hit) return false;
  }
  return true;
}

Cover covering_number_greedy(const FiniteMetricSpace& space, double eta) {
  require_positive_eta(eta);
  const std::size_t n = space.size();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  Cover cover{0, {}, eta};
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (!covered[i] && space.distance(c, i) <= eta) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!covered[i] && space.distance(best, i) <= eta) {
        covered[i] = true;
        --remaining;
      }
    cover.centers.push_back(best);
  }
  std::sort(cover.centers.begin(), cover.centers.end());
  cover.count = cover.centers.size();
  return cover;
}

Cover covering_number_exact(const FiniteMetricSpace& space, double eta, std::size_t exact_limit) {
  require_positive_eta(eta);
  const std::size_t n = space.size();
  if (exact_limit > kMaxExactPoints)
    throw Error(ErrorKind::BadParameters, kModule, "exact limit exceeds " + std::to_string(kMaxExactPoints));
  if (n > exact_limit)
    throw Error(ErrorKind::TooLarge, kModule,
                std::to_string(n) + " points exceed the exact limit " + std::to_string(exact_limit) +
                    "; use the greedy cover");

  std::vector<Mask> balls(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i)
      if (space.distance(c, i) <= eta) balls[c] |= Mask{1} << i;

  const Mask universe = n == kMaxExactPoints ? ~Mask{0} : (Mask{1} << n) - 1;
  Cover greedy = covering_number_greedy(space, eta);
  SetCoverSearch search(std::move(balls), greedy.centers);
  Cover cover{0, search.run(universe), eta};
  std::sort(cover.centers.begin(), cover.centers.end());
  cover.count = cover.centers.size();
  return cover;
}

Cover covering_number(const FiniteMetricSpace& space, double eta, NetMode mode, std::size_t exact_limit) {
  switch (mode) {
    case NetMode::Exact: return covering_number_exact(space, eta, exact_limit);
    case NetMode::Greedy: return covering_number_greedy(space, eta);
    case NetMode::Auto:
      return space.size() <= exact_limit ? covering_number_exact(space, eta, exact_limit)
                                         : covering_number_greedy(space, eta);
  }
  return covering_number_greedy(space, eta);
}

EntropyParams fit_entropy_params(const FiniteMetricSpace& space, std::span<const double> eta_grid,
                                 std::optional<double> t_fixed, NetMode mode, std::size_t exact_limit) {
  if (eta_grid.empty()) throw Error(ErrorKind::EmptyGrid, kModule, "entropy fit needs at least one radius");
  if (t_fixed && !(*t_fixed > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "fixed exponent t must be positive");

  std::vector<double> counts;
  counts.reserve(eta_grid.size());
  for (double eta : eta_grid) counts.push_back(static_cast<double>(covering_number(space, eta, mode, exact_limit).count));

  double t = 0.0;
  if (t_fixed) {
    t = *t_fixed;
  } else {
    // Least squares of log N on -log eta.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(eta_grid.size());
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
      const double x = -std::log(eta_grid[i]);
      const double y = std::log(counts[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    const double slope = denom > 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    t = std::max(slope, kMinFittedExponent);
  }

  double C = 0.0;
  for (std::size_t i = 0; i < eta_grid.size(); ++i) C = std::max(C, counts[i] * std::pow(eta_grid[i], t));
  // C eta^t rounds, so the binding point can miss by an ulp when the bound is
  // evaluated the other way round; step C up until it dominates as evaluated.
  for (std::size_t i = 0; i < eta_grid.size(); ++i)
    while (counts[i] / (C * std::pow(eta_grid[i], -t)) > 1.0) C = std::nextafter(C, INFINITY);
  return EntropyParams{C, t, space.diameter()};
}

double euclidean_entropy_bound(double diameter, int m, double eta) {
  require_positive_eta(eta);
  if (m < 1) throw Error(ErrorKind::BadParameters, kModule, "dimension must be at least 1");
  if (diameter < 0.0) throw Error(ErrorKind::BadParameters, kModule, "diameter must be nonnegative");
  return std::pow((diameter + eta) / eta, m);
}

EuclideanEntropyCandidates euclidean_entropy_candidates(double diameter, int m) {
  if (m < 1) throw Error(ErrorKind::BadParameters, kModule, "dimension must be at least 1");
  const double t = m;
  return {EntropyParams{2.0 * diameter, t, diameter}, EntropyParams{std::pow(2.0 * diameter, m), t, diameter}};
}

EntropyCheck check_entropy(const FiniteMetricSpace& space, const EntropyParams& params,
                           std::span<const double> eta_grid, NetMode mode, std::size_t exact_limit) {
  EntropyCheck out;
  for (double eta : eta_grid) {
    if (!(eta > 0.0) || eta > params.eta_max) continue;
    const auto count = covering_number(space, eta, mode, exact_limit).count;
    const double ratio = static_cast<double>(count) / (params.C * std::pow(eta, -params.t));
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.witness_eta = eta;
      out.witness_count = count;
    }
  }
  out.holds = out.worst_ratio <= 1.0;
  return out;
}

std::vector<double> dyadic_eta_grid(const FiniteMetricSpace& space) {
  std::vector<double> grid;
  const double diam = space.diameter();
  if (!(diam > 0.0)) return grid;
  const double gap = space.min_gap();
  for (int k = 0; k < 1100; ++k) {
    const double eta = std::ldexp(diam, -k);
    grid.push_back(eta);
    if (eta < gap) break;
  }
  return grid;
}

}  // namespace chainkit
