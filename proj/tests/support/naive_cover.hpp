#pragma once

// Exhaustive-subset covering oracle: enumerates center subsets by increasing
// size. Exponential; meant for n <= 12.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chainkit/metric_space.hpp"

namespace chainkit::oracle {

inline std::size_t naive_covering_number(const FiniteMetricSpace& space, double eta) {
  const std::size_t n = space.size();
  if (n > 16) throw std::invalid_argument("naive oracle limited to 16 points");
  std::vector<std::uint32_t> ball(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t x = 0; x < n; ++x)
      if (space.distance(c, x) <= eta) ball[c] |= 1u << x;
  const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1u;
  std::size_t best = n;
  for (std::uint32_t subset = 1; subset <= all; ++subset) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(subset));
    if (size >= best) continue;
    std::uint32_t covered = 0;
    for (std::size_t c = 0; c < n; ++c)
      if (subset & (1u << c)) covered |= ball[c];
    if (covered == all) best = size;
  }
  return best;
}

}  // namespace chainkit::oracle
