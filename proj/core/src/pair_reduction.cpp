#include "chainkit/pair_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chainkit/ensemble.hpp"
#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "pair_reduction";

}  // namespace

PairReduction build_pair_set(const FiniteMetricSpace& space, double A, int r, double c) {
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_pair_set(space, all, A, r, c);
}

PairReduction build_pair_set(const FiniteMetricSpace& space, std::span<const std::size_t> support,
                             double A, int r, double c) {
  if (!(A >= 1.0) || !std::isfinite(A)) throw Error(ErrorKind::BadParameters, kModule, "A must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::BadParameters, kModule, "c must be positive");
  if (r < 1) throw Error(ErrorKind::BadParameters, kModule, "r must be >= 1");
  if (support.empty()) throw Error(ErrorKind::BadParameters, kModule, "support must be nonempty");

  PairReduction out;
  out.A = A;
  out.r = r;
  out.c = c;
  out.support.assign(support.begin(), support.end());
  std::sort(out.support.begin(), out.support.end());
  if (std::adjacent_find(out.support.begin(), out.support.end()) != out.support.end() ||
      out.support.back() >= space.size())
    throw Error(ErrorKind::BadParameters, kModule, "support must list distinct valid point indices");
  if (std::pow(A, r) < static_cast<double>(out.support.size()))
    throw Error(ErrorKind::BadParameters, kModule,
                "A^r = " + std::to_string(std::pow(A, r)) + " is below the support size " +
                    std::to_string(out.support.size()));

  std::vector<std::size_t> V = out.support;
  std::size_t step = 0;
  while (!V.empty()) {
    ++step;
    const std::size_t center = V.front();
    int chosen = r;
    for (int s = 1; s <= r; ++s) {
      const double radius = s * c;
      const auto inside = std::count_if(V.begin(), V.end(),
                                        [&](std::size_t x) { return space.distance(x, center) <= radius; });
      if (static_cast<double>(inside) <= std::pow(A, s)) {
        chosen = s;
        break;
      }
    }
    for (std::size_t x : V)
      if (space.distance(center, x) <= c * chosen) out.pairs.emplace_back(center, x);

    const double keep_beyond = (chosen - 1) * c;
    std::vector<std::size_t> next;
    for (std::size_t x : V)
      if (space.distance(x, center) > keep_beyond) next.push_back(x);
    out.trace.push_back(PeelStep{step, center, chosen, V.size() - next.size()});
    V = std::move(next);
  }
  return out;
}

PropertyReport validate_reduction(const FiniteMetricSpace& space, const PairReduction& red) {
  PropertyReport report;
  const double card = static_cast<double>(red.support.size());

  report.checks.push_back(PropertyCheck{"cardinality", static_cast<double>(red.pairs.size()) <= red.A * card,
                                        "card(U) <= A card(support)",
                                        {static_cast<long long>(red.pairs.size())}});
  if (report.checks.back().pass) report.checks.back().witness.clear();

  {
    PropertyCheck c{"pair_diameter", true, "(x, y) in U implies d(x, y) <= c r", {}};
    for (const auto& [x, y] : red.pairs)
      if (!(space.distance(x, y) <= red.c * red.r)) {
        c.pass = false;
        c.witness = {static_cast<long long>(x), static_cast<long long>(y)};
        break;
      }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"peel_budget", true, "1 <= r_l <= r and sum_l A^{r_l} <= A card(support)", {}};
    double budget = 0.0;
    for (const auto& s : red.trace) {
      if (s.radius_multiple < 1 || s.radius_multiple > red.r) {
        c.pass = false;
        c.witness = {static_cast<long long>(s.step)};
        break;
      }
      budget += std::pow(red.A, s.radius_multiple);
    }
    if (c.pass && budget > red.A * card * (1.0 + 1e-12)) {
      c.pass = false;
      c.detail += " (budget exceeded)";
    }
    report.checks.push_back(std::move(c));
  }

  {
    PropertyCheck c{"strict_peeling", true, "each step removes at least theta_l and all points are peeled", {}};
    std::size_t removed = 0;
    for (const auto& s : red.trace) {
      if (s.removed < 1) {
        c.pass = false;
        c.witness = {static_cast<long long>(s.step)};
        break;
      }
      removed += s.removed;
    }
    if (c.pass && removed != red.support.size()) {
      c.pass = false;
      c.detail += " (points left unpeeled)";
    }
    report.checks.push_back(std::move(c));
  }
  return report;
}

DominationCheck check_domination(const FiniteMetricSpace& space, const PairReduction& red,
                                 std::span<const double> values, std::size_t dim, double c) {
  if (dim < 1) throw Error(ErrorKind::BadParameters, kModule, "value dimension must be >= 1");
  if (values.size() < space.size() * dim)
    throw Error(ErrorKind::MissingValue, kModule,
                "expected " + std::to_string(space.size() * dim) + " values, got " + std::to_string(values.size()));
  DominationCheck out;
  const auto& S = red.support;
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b)
      if (space.distance(S[a], S[b]) <= c) out.lhs = std::max(out.lhs, value_distance(values, dim, S[a], S[b]));
  double sup_u = 0.0;
  for (const auto& [x, y] : red.pairs) sup_u = std::max(sup_u, value_distance(values, dim, x, y));
  out.rhs = 2.0 * sup_u;
  // A few ulps of slack: the inequality is a float triangle inequality at equality.
  out.pass = out.lhs <= out.rhs * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
  return out;
}

}  // namespace chainkit
