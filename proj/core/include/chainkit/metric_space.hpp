#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chainkit {

/// Controls the O(n^3) triangle-inequality scan during validation.
enum class Validation {
  Full,          ///< always check the triangle inequality
  SkipTriangle,  ///< symmetry, diagonal and positivity only
  Auto,          ///< Full for n <= kTriangleCheckLimit, SkipTriangle above
};

inline constexpr std::size_t kTriangleCheckLimit = 2000;
inline constexpr double kMetricTolerance = 1e-12;

struct MetricViolation {
  std::string reason;
  std::vector<std::size_t> witness;
};

/// First violation of the strict-metric axioms in `dist`, if any.
std::optional<MetricViolation> find_metric_violation(const Eigen::MatrixXd& dist,
                                                     bool check_triangle = true,
                                                     double tol = kMetricTolerance);

/// A finite set of labelled points with a validated strict metric.
///
/// Distinct points always have strictly positive distance; pseudo-metrics are
/// rejected at construction because Hölder quotients divide by distances.
/// Instances are immutable and cheap to share between readers.
class FiniteMetricSpace {
 public:
  /// Euclidean distances between the rows of `coords`.
  /// Throws DuplicatePoint if two rows coincide.
  static FiniteMetricSpace euclidean(Eigen::MatrixXd coords, std::vector<std::string> labels = {});

  /// Validates `dist` and throws NotAMetric with witness indices on failure.
  static FiniteMetricSpace from_matrix(std::vector<std::string> labels, Eigen::MatrixXd dist,
                                       Validation validation = Validation::Auto);

  std::size_t size() const noexcept { return labels_.size(); }
  double distance(std::size_t i, std::size_t j) const { return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  const Eigen::MatrixXd& distances() const noexcept { return dist_; }
  const std::optional<Eigen::MatrixXd>& coords() const noexcept { return coords_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t dimension() const noexcept { return coords_ ? static_cast<std::size_t>(coords_->cols()) : 0; }

  /// Largest pairwise distance; 0 for a singleton.
  double diameter() const noexcept { return diameter_; }
  /// Smallest distance between distinct points. Throws TooFewPoints if size() < 2.
  double min_gap() const;

  /// Space whose point k is point perm[k] of this one.
  FiniteMetricSpace permuted(std::span<const std::size_t> perm) const;

  /// Stable 64-bit digest of the distance matrix, used to tie path files to spaces.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist,
                    std::optional<Eigen::MatrixXd> coords);

  std::vector<std::string> labels_;
  Eigen::MatrixXd dist_;
  std::optional<Eigen::MatrixXd> coords_;
  double diameter_ = 0.0;
  double min_gap_ = 0.0;
  std::uint64_t fingerprint_ = 0;
};

/// Points lo, lo + h, ..., hi on the line (count >= 1).
FiniteMetricSpace uniform_grid(std::size_t count, double lo = 0.0, double hi = 1.0);

}  // namespace chainkit
