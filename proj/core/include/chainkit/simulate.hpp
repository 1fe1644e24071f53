#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chainkit/ensemble.hpp"
#include "chainkit/metric_space.hpp"
#include "chainkit/rng.hpp"

namespace chainkit {

/// (M, p, q) with E d(X_x, X_y)^p <= M d(x, y)^q. `exact` marks an identity
/// rather than an inequality (Gaussian increments).
struct MomentCertificate {
  double M = 1.0;
  double p = 2.0;
  double q = 1.0;
  bool exact = false;
};

/// E|Z|^p = 2^(p/2) Gamma((p+1)/2) / sqrt(pi) for standard normal Z.
double gaussian_abs_moment(double p);

/// Moment certificate of a built-in process kind at moment order p.
/// FBM: M = E|Z|^p, q = pH, exact. Chi2Ramp: even integer p only,
/// M = E|Z^2 - 1|^p / 2^(p/2), q = p, an inequality.
MomentCertificate certificate_for(const ProcessSpec& process, double p);

/// Exact sampler for a centred Gaussian vector with the fBm field covariance
/// (|x|^2H + |y|^2H - |x - y|^2H) / 2 on the coordinates of a space.
///
/// Uses a pivoted LDL^T factorization so points with zero variance (the
/// origin) come out exactly zero. Indefiniteness is repaired by diagonal
/// jitter 1e-12, 1e-10, 1e-8 relative to the largest variance; beyond that the
/// constructor throws FactorizationFailure.
class GaussianFieldSampler {
 public:
  GaussianFieldSampler(const FiniteMetricSpace& space, double H);

  /// Writes one sample into `out` (size n) using standard normals from `engine`.
  void sample(Philox4x32& engine, std::span<double> out) const;
  /// Adds one sample into `out`.
  void accumulate(Philox4x32& engine, std::span<double> out) const;

  double jitter() const noexcept { return jitter_; }
  const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

 private:
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd factor_;  // covariance = factor * factor^T, up to jitter
  double jitter_ = 0.0;
};

struct FieldSimulation {
  PathEnsemble ensemble;
  MomentCertificate certificate;
};

/// R i.i.d. replications of fractional Brownian motion (Lévy field for
/// dimension > 1) on the space coordinates. Replication r draws from
/// Philox4x32(seed, r). Certificate at moment order p.
FieldSimulation simulate_fbm_field(const FiniteMetricSpace& space, double H, std::size_t R,
                                   std::uint64_t seed, double p = 2.0);

/// Plain ensemble of any built-in kind.
PathEnsemble simulate_process(const FiniteMetricSpace& space, const ProcessSpec& process, std::size_t R,
                              std::uint64_t seed);

/// For each n, R replications of S_n = n^(-1/2) sum_{i<=n} X_i with fresh
/// i.i.d. centred summands. Replication r of S_n uses stream (n << 40) | r,
/// so each n is reproducible on its own.
std::map<std::size_t, PathEnsemble> simulate_partial_sums(const FiniteMetricSpace& space,
                                                          const ProcessSpec& process,
                                                          std::span<const std::size_t> n_values,
                                                          std::size_t R, std::uint64_t seed);

/// Stream id of replication r of the S_n ensemble.
std::uint64_t partial_sum_stream(std::size_t n, std::size_t r);

}  // namespace chainkit
