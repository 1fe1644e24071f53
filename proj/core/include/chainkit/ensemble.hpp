#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace chainkit {

enum class ProcessKind {
  FBM,       ///< fractional Brownian field with Hurst index H (H = 0.5: Brownian)
  Chi2Ramp,  ///< X(x) = (Z^2 - 1)/sqrt(2) * |x|, a centred non-Gaussian field
};

std::string to_string(ProcessKind kind);
ProcessKind process_kind_from_string(const std::string& name);

struct ProcessSpec {
  ProcessKind kind = ProcessKind::FBM;
  double H = 0.5;
};

/// R replications of a process observed on the n points of a finite space,
/// with values in R^d. Layout is replication-major: values[(r * n + i) * d + k].
struct PathEnsemble {
  std::uint64_t space_id = 0;
  std::size_t R = 0;
  std::size_t n = 0;
  std::size_t d = 1;
  std::uint64_t seed = 0;
  ProcessSpec process;
  std::size_t summands = 0;  ///< n of the partial-sum process S_n; 0 for a plain ensemble
  std::vector<double> values;

  std::span<const double> path(std::size_t r) const {
    return {values.data() + r * n * d, n * d};
  }
  std::span<double> path(std::size_t r) { return {values.data() + r * n * d, n * d}; }
  double value(std::size_t r, std::size_t i, std::size_t k = 0) const { return values[(r * n + i) * d + k]; }
};

/// Euclidean distance between points i and j of a path with value dimension d.
inline double value_distance(std::span<const double> path, std::size_t d, std::size_t i, std::size_t j) {
  if (d == 1) return std::abs(path[i] - path[j]);
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = path[i * d + k] - path[j * d + k];
    s += diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace chainkit
