#include "chainkit/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "metric_space";

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

std::uint64_t fnv1a(const Eigen::MatrixXd& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  mix(&rows, sizeof rows);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      double v = m(i, j);
      if (v == 0.0) v = 0.0;  // fold -0.0
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      mix(&bits, sizeof bits);
    }
  return h;
}

}  // namespace

std::optional<MetricViolation> find_metric_violation(const Eigen::MatrixXd& dist, bool check_triangle,
                                                     double tol) {
  const Eigen::Index n = dist.rows();
  if (dist.cols() != n) return MetricViolation{"matrix is not square", {}};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(dist(i, i)) <= tol))
      return MetricViolation{"nonzero diagonal", {static_cast<std::size_t>(i)}};
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const std::vector<std::size_t> w{static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      if (!std::isfinite(dist(i, j)) || !std::isfinite(dist(j, i)))
        return MetricViolation{"non-finite distance", w};
      if (std::abs(dist(i, j) - dist(j, i)) > tol) return MetricViolation{"asymmetric", w};
      if (dist(i, j) <= 0.0) return MetricViolation{"nonpositive distance between distinct points", w};
    }
  if (check_triangle) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          if (dist(i, k) > dist(i, j) + dist(j, k) + tol)
            return MetricViolation{"triangle inequality violated: d(i,k) > d(i,j) + d(j,k)",
                                   {static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                    static_cast<std::size_t>(k)}};
        }
  }
  return std::nullopt;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, Eigen::MatrixXd dist,
                                     std::optional<Eigen::MatrixXd> coords)
    : labels_(std::move(labels)), dist_(std::move(dist)), coords_(std::move(coords)) {
  const Eigen::Index n = dist_.rows();
  min_gap_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      diameter_ = std::max(diameter_, dist_(i, j));
      min_gap_ = std::min(min_gap_, dist_(i, j));
    }
  fingerprint_ = fnv1a(dist_);
}

FiniteMetricSpace FiniteMetricSpace::euclidean(Eigen::MatrixXd coords, std::vector<std::string> labels) {
  const Eigen::Index n = coords.rows();
  if (n < 1) throw Error(ErrorKind::TooFewPoints, kModule, "need at least one point");
  if (coords.cols() < 1) throw Error(ErrorKind::BadParameters, kModule, "coordinates need at least one column");
  if (!coords.allFinite()) throw Error(ErrorKind::BadParameters, kModule, "non-finite coordinate");
  if (labels.empty()) labels = default_labels(static_cast<std::size_t>(n));
  if (labels.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::BadParameters, kModule, "label count does not match point count");

  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (coords.row(i) - coords.row(j)).norm();
      if (d == 0.0)
        throw Error(ErrorKind::DuplicatePoint, kModule,
                    "rows " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      dist(i, j) = d;
      dist(j, i) = d;
    }
  return FiniteMetricSpace(std::move(labels), std::move(dist), std::move(coords));
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> labels, Eigen::MatrixXd dist,
                                                 Validation validation) {
  const Eigen::Index n = dist.rows();
  if (n < 1) throw Error(ErrorKind::TooFewPoints, kModule, "need at least one point");
  if (labels.empty()) labels = default_labels(static_cast<std::size_t>(n));
  if (labels.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::BadParameters, kModule, "label count does not match matrix size");

  const bool triangle = validation == Validation::Full ||
                        (validation == Validation::Auto && static_cast<std::size_t>(n) <= kTriangleCheckLimit);
  if (auto bad = find_metric_violation(dist, triangle)) {
    std::string w;
    for (std::size_t k = 0; k < bad->witness.size(); ++k) w += (k ? "," : "") + std::to_string(bad->witness[k]);
    throw Error(ErrorKind::NotAMetric, kModule, bad->reason + " (witness " + w + ")");
  }
  // Fold the tolerated asymmetry away so every consumer sees an exactly symmetric matrix.
  Eigen::MatrixXd sym = 0.5 * (dist + dist.transpose());
  sym.diagonal().setZero();
  return FiniteMetricSpace(std::move(labels), std::move(sym), std::nullopt);
}

double FiniteMetricSpace::min_gap() const {
  if (size() < 2) throw Error(ErrorKind::TooFewPoints, kModule, "min_gap needs at least two points");
  return min_gap_;
}

FiniteMetricSpace FiniteMetricSpace::permuted(std::span<const std::size_t> perm) const {
  const std::size_t n = size();
  if (perm.size() != n) throw Error(ErrorKind::BadParameters, kModule, "permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorKind::BadParameters, kModule, "not a permutation");
    seen[p] = true;
  }
  std::vector<std::string> labels(n);
  Eigen::MatrixXd dist(n, n);
  std::optional<Eigen::MatrixXd> coords;
  if (coords_) coords = Eigen::MatrixXd(coords_->rows(), coords_->cols());
  for (std::size_t a = 0; a < n; ++a) {
    labels[a] = labels_[perm[a]];
    if (coords) coords->row(static_cast<Eigen::Index>(a)) = coords_->row(static_cast<Eigen::Index>(perm[a]));
    for (std::size_t b = 0; b < n; ++b) dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = distance(perm[a], perm[b]);
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist), std::move(coords));
}

FiniteMetricSpace uniform_grid(std::size_t count, double lo, double hi) {
  if (count < 1) throw Error(ErrorKind::TooFewPoints, kModule, "grid needs at least one point");
  if (count > 1 && !(hi > lo)) throw Error(ErrorKind::BadParameters, kModule, "grid needs hi > lo");
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(count), 1);
  for (std::size_t i = 0; i < count; ++i) {
    // i/(count-1) keeps dyadic grids exact, e.g. 33 points give multiples of 1/32.
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    coords(static_cast<Eigen::Index>(i), 0) = lo + s * (hi - lo);
  }
  return FiniteMetricSpace::euclidean(std::move(coords));
}

}  // namespace chainkit
