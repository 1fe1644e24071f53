#include "chainkit/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "chaining";

// Relative slack for comparisons that hold with equality in exact arithmetic.
constexpr double kSlack = 1e-12;

bool within(double value, double bound) { return value <= bound * (1.0 + kSlack); }

double pow2(int e) { return std::ldexp(1.0, e); }

}  // namespace

DyadicLevels dyadic_levels(const FiniteMetricSpace& space) {
  if (space.size() < 2 || !(space.diameter() > 0.0))
    throw Error(ErrorKind::DegenerateSpace, kModule, "need at least two points with positive diameter");
  const double diam = space.diameter();
  const double gap = space.min_gap();

  int n0 = static_cast<int>(std::floor(-std::log2(diam)));
  while (!(diam <= pow2(-n0))) --n0;
  while (diam <= pow2(-(n0 + 1))) ++n0;

  int n1 = static_cast<int>(std::ceil(-std::log2(gap)));
  while (!(pow2(-n1) < gap)) ++n1;
  while (pow2(-(n1 - 1)) < gap) --n1;

  return {n0, n1};
}

ChainingFamily::ChainingFamily(int n0, int n1, std::vector<std::vector<std::size_t>> nets,
                               std::vector<std::vector<std::size_t>> maps, NetMode mode)
    : n0_(n0), n1_(n1), nets_(std::move(nets)), maps_(std::move(maps)), mode_(mode) {
  const auto levels = static_cast<std::size_t>(n1 - n0 + 1);
  if (n1 < n0 || nets_.size() != levels || maps_.size() != levels)
    throw Error(ErrorKind::InvalidLevels, kModule, "nets and maps must cover levels n0..n1");
}

std::size_t ChainingFamily::slot(int level) const {
  if (level < n0_ || level > n1_)
    throw Error(ErrorKind::LevelOutOfRange, kModule,
                "level " + std::to_string(level) + " outside [" + std::to_string(n0_) + ", " + std::to_string(n1_) + "]");
  return static_cast<std::size_t>(level - n0_);
}

const std::vector<std::size_t>& ChainingFamily::net(int level) const { return nets_[slot(level)]; }
const std::vector<std::size_t>& ChainingFamily::map(int level) const { return maps_[slot(level)]; }

std::map<int, std::size_t> ChainingFamily::net_cardinalities() const {
  std::map<int, std::size_t> cards;
  for (int n = n0_; n <= n1_; ++n) cards[n] = net(n).size();
  return cards;
}

ChainingFamily build_chaining_family(const FiniteMetricSpace& space, NetMode mode, std::size_t exact_limit) {
  const auto [n0, n1] = dyadic_levels(space);
  const std::size_t n = space.size();
  if (mode == NetMode::Auto) mode = n <= exact_limit ? NetMode::Exact : NetMode::Greedy;

  std::vector<std::vector<std::size_t>> nets;
  for (int level = n0; level <= n1; ++level)
    nets.push_back(covering_number(space, pow2(-level), mode, exact_limit).centers);

  const auto levels = static_cast<std::size_t>(n1 - n0 + 1);
  std::vector<std::vector<std::size_t>> maps(levels);
  maps.back().resize(n);
  for (std::size_t i = 0; i < n; ++i) maps.back()[i] = i;

  for (int level = n1 - 1; level >= n0; --level) {
    const auto& net = nets[static_cast<std::size_t>(level - n0)];
    // Nearest net point for every point that can appear as phi_{level+1}(x).
    std::vector<std::size_t> nearest(n);
    for (std::size_t x = 0; x < n; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c : net) {  // ascending, so strict < keeps the lowest index
        const double d = space.distance(x, c);
        if (d < best) {
          best = d;
          nearest[x] = c;
        }
      }
    }
    const auto& upper = maps[static_cast<std::size_t>(level + 1 - n0)];
    auto& current = maps[static_cast<std::size_t>(level - n0)];
    current.resize(n);
    for (std::size_t x = 0; x < n; ++x) current[x] = nearest[upper[x]];
  }
  return ChainingFamily(n0, n1, std::move(nets), std::move(maps), mode);
}

PropertyReport validate_family(const FiniteMetricSpace& space, const ChainingFamily& family,
                               bool exact_cardinality, std::size_t exact_limit) {
  const std::size_t n = space.size();
  if (family.point_count() != n)
    throw Error(ErrorKind::BadParameters, kModule, "family and space disagree on the number of points");
  const int n0 = family.n0(), n1 = family.n1();
  PropertyReport report;

  {
    PropertyCheck c{"level_order", n0 < n1, "n0 < n1", {}};
    if (!c.pass) c.witness = {n0, n1};
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"maps_into_nets", true, "phi_n maps every point into Theta_n", {}};
    for (int level = n0; level <= n1 && c.pass; ++level) {
      const auto& net = family.net(level);
      for (std::size_t x = 0; x < n; ++x) {
        const auto y = family.phi(level, x);
        if (y >= n || !std::binary_search(net.begin(), net.end(), y)) {
          c.pass = false;
          c.witness = {level, static_cast<long long>(x)};
          break;
        }
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"net_cardinality", true,
                    exact_cardinality ? "card(Theta_n) = N(2^-n)" : "card(Theta_n) <= greedy N(2^-n)", {}};
    for (int level = n0; level <= n1; ++level) {
      const auto mode = exact_cardinality ? NetMode::Exact : NetMode::Greedy;
      const auto expected = covering_number(space, pow2(-level), mode, exact_limit).count;
      const auto actual = family.net(level).size();
      const bool ok = exact_cardinality ? actual == expected : actual <= expected;
      if (!ok) {
        c.pass = false;
        c.witness = {level, static_cast<long long>(actual), static_cast<long long>(expected)};
        break;
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"net_covering", true, "every point within 2^-n of Theta_n", {}};
    for (int level = n0; level <= n1 && c.pass; ++level) {
      const auto& net = family.net(level);
      for (std::size_t x = 0; x < n; ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (auto y : net) best = std::min(best, space.distance(x, y));
        if (!(best <= pow2(-level))) {
          c.pass = false;
          c.witness = {level, static_cast<long long>(x)};
          break;
        }
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"identity", true, "phi_{n1} = id and phi_{n0} constant", {}};
    for (std::size_t x = 0; x < n; ++x)
      if (family.phi(n1, x) != x) {
        c.pass = false;
        c.detail = "phi_{n1} is not the identity";
        c.witness = {static_cast<long long>(x)};
        break;
      }
    if (c.pass) {
      for (std::size_t x = 1; x < n; ++x)
        if (family.phi(n0, x) != family.phi(n0, 0)) {
          c.pass = false;
          c.detail = "phi_{n0} is not constant";
          c.witness = {0, static_cast<long long>(x)};
          break;
        }
    }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"link_distance", true, "d(phi_{n+1}(x), phi_n(x)) <= 2^-n", {}};
    for (int level = n0; level < n1 && c.pass; ++level)
      for (std::size_t x = 0; x < n; ++x)
        if (!within(space.distance(family.phi(level + 1, x), family.phi(level, x)), pow2(-level))) {
          c.pass = false;
          c.witness = {level, static_cast<long long>(x)};
          break;
        }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"link_cardinality", true, "card{(phi_{n+1}(x), phi_n(x))} <= N(2^-(n+1))", {}};
    for (int level = n0; level < n1; ++level) {
      std::set<std::pair<std::size_t, std::size_t>> links;
      for (std::size_t x = 0; x < n; ++x) links.emplace(family.phi(level + 1, x), family.phi(level, x));
      const auto mode = exact_cardinality ? NetMode::Exact : NetMode::Greedy;
      const auto cap = covering_number(space, pow2(-(level + 1)), mode, exact_limit).count;
      if (links.size() > cap) {
        c.pass = false;
        c.witness = {level, static_cast<long long>(links.size()), static_cast<long long>(cap)};
        break;
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"projection_distance", true, "d(phi_n(x), phi_n(y)) <= 2^(-n+2) + d(x, y)", {}};
    for (int level = n0; level <= n1 && c.pass; ++level)
      for (std::size_t x = 0; x < n && c.pass; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
          const double lhs = space.distance(family.phi(level, x), family.phi(level, y));
          if (!within(lhs, pow2(-level + 2) + space.distance(x, y))) {
            c.pass = false;
            c.witness = {level, static_cast<long long>(x), static_cast<long long>(y)};
            break;
          }
        }
    report.checks.push_back(std::move(c));
  }

  return report;
}

std::vector<std::size_t> chain_decompose(const ChainingFamily& family, std::size_t point, int level) {
  if (level < family.n0() || level >= family.n1())
    throw Error(ErrorKind::LevelOutOfRange, kModule,
                "chain level " + std::to_string(level) + " outside [" + std::to_string(family.n0()) + ", " +
                    std::to_string(family.n1() - 1) + "]");
  if (point >= family.point_count()) throw Error(ErrorKind::BadParameters, kModule, "point index out of range");
  std::vector<std::size_t> chain;
  for (int k = level; k <= family.n1(); ++k) chain.push_back(family.phi(k, point));
  return chain;
}

}  // namespace chainkit
