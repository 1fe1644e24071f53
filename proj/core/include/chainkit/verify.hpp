#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainkit/bounds.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/ensemble.hpp"
#include "chainkit/metric_space.hpp"
#include "chainkit/simulate.hpp"

namespace chainkit {

/// Monte Carlo mean with std_error = sample standard deviation / sqrt(R).
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t R = 0;
  std::string statistic;
};

/// Per-replication statistic values -> estimate. Deterministic pairwise sums.
MCEstimate summarize(std::span<const double> samples, std::string statistic);

/// One-sided check of an expectation inequality E[stat] <= bound.
struct VerificationReport {
  std::string statistic;
  double delta = 0.0;  ///< scale parameter (delta or 0 when not applicable)
  double beta = 0.0;
  MCEstimate estimate;
  double bound = 0.0;
  double margin = 0.0;        ///< (bound - mean) / std_error; +-inf when std_error is 0
  bool pass = false;          ///< mean + 3 std_error <= bound
  bool empty_pairs = false;   ///< sup over an empty pair set; the zero estimate is not evidence
  bool near_bound = false;    ///< passed, but with less than a factor 2 of room
  std::map<std::string, double> details;
};

inline constexpr double kPassSigmas = 3.0;

/// Builds a report from an estimate and a bound, applying the pass rule.
VerificationReport make_report(std::string statistic, MCEstimate estimate, double bound, double delta = 0.0,
                               double beta = 0.0);

using PointPairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Unordered pairs i < j with d(i, j) <= delta.
PointPairs pairs_within(const FiniteMetricSpace& space, double delta);

/// sup over pairs with d <= delta of the value distance; 0 if there are none.
double empirical_modulus(const FiniteMetricSpace& space, std::span<const double> path, std::size_t dim,
                         double delta);

struct SupEstimate {
  MCEstimate estimate;
  bool empty_pairs = false;
};

/// E[sup_{d(x,y) <= delta} d_X(X_x, X_y)^p].
SupEstimate estimate_sup_increment_moment(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                          double delta, double p);

/// E[sup_{x != y} d_X(X_x, X_y)^p / d(x, y)^(beta p)].
MCEstimate estimate_holder_quotient_moment(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                           double beta, double p);

/// Moment constants combined with entropy constants and the parameter-set
/// diameter; throws ParamViolation if q <= t or beta is outside (0, (q - t)/p).
BoundParams bound_params(const MomentCertificate& cert, const EntropyParams& entropy, double beta, double diam);

/// One report per delta: E sup increment^p against L delta^(beta p).
std::vector<VerificationReport> verify_corollary(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                                 const MomentCertificate& cert, const EntropyParams& entropy,
                                                 double beta, std::span<const double> deltas,
                                                 double tol = 1e-12);

/// E sup Hölder quotient against L.
VerificationReport verify_holder(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                 const MomentCertificate& cert, const EntropyParams& entropy, double beta,
                                 double tol = 1e-12);

struct LemmaCheckOptions {
  NetMode mode = NetMode::Auto;
  LemmaConstant constant = LemmaConstant::Statement;
  std::size_t exact_limit = kDefaultExactLimit;
  bool pathwise = true;  ///< also replay the chaining decomposition on every replication
};

/// E sup_{d <= delta} increment^p against the modulus bound with the space's
/// own N(delta/4). Below the minimal gap the report is a flagged trivial pass.
/// With `pathwise`, details["decomposition_violations"] counts replications
/// where the deterministic chaining split (nets, projections and the pair set
/// on the coarse net) fails; it must be 0.
VerificationReport verify_lemma_b27(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                    const MomentCertificate& cert, const EntropyParams& entropy, double delta,
                                    const LemmaCheckOptions& options = {});

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for k successes out of n at normal quantile z.
WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z = 2.5758293035489004);

struct TightnessEntry {
  std::size_t n = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  std::size_t hits = 0;
  std::size_t R = 0;
  double probability = 0.0;
  WilsonInterval ci;
};

struct TightnessTable {
  std::vector<TightnessEntry> entries;

  const TightnessEntry& at(std::size_t n, double delta, double epsilon) const;
  /// max over n of the entry at (delta, epsilon).
  const TightnessEntry& max_over_n(double delta, double epsilon) const;
};

/// Fraction of replications with w(X_n, delta) >= epsilon for every grid cell.
TightnessTable tightness_table(const FiniteMetricSpace& space, const std::map<std::size_t, PathEnsemble>& ensembles,
                               std::span<const double> deltas, std::span<const double> epsilons);

/// For decreasing delta, max_n P(w >= eps) must not increase beyond Wilson
/// interval overlap. Returns the first offending delta pair, if any.
struct MonotonicityCheck {
  bool pass = true;
  double delta_coarse = 0.0;
  double delta_fine = 0.0;
};
MonotonicityCheck check_tightness_monotone(const TightnessTable& table, std::span<const double> deltas,
                                           double epsilon);

struct IdentityCheck {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double expected = 0.0;
  bool pass = true;  ///< |mean - expected| <= 5 std_error
};

struct CltMomentChain {
  std::vector<VerificationReport> reports;   ///< per pair: sup_n E|S_n(x) - S_n(y)|^2 <= 4 M d^q
  std::vector<IdentityCheck> identity;       ///< per pair and n, for exact certificates
  bool all_pass() const;
};

inline constexpr double kIdentitySigmas = 5.0;

/// Second-moment chain for partial-sum processes. Throws WrongOrder unless
/// the certificate has p = 2.
CltMomentChain verify_clt_moment_chain(const FiniteMetricSpace& space,
                                       const std::map<std::size_t, PathEnsemble>& ensembles,
                                       const MomentCertificate& base);

struct CertificateCheck {
  std::size_t i = 0;
  std::size_t j = 0;
  double ratio = 0.0;      ///< empirical E d^p / (M d^q)
  double ratio_se = 0.0;   ///< its standard error
  bool pass = true;
};

/// Per pair: for exact certificates |ratio - 1| <= 5 ratio_se, otherwise the
/// one-sided ratio <= 1 + 5 ratio_se.
std::vector<CertificateCheck> check_certificate(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                                const MomentCertificate& cert);

/// Kolmogorov-Smirnov distance of the sample to N(0, sd^2).
double ks_distance_normal(std::vector<double> samples, double sd = 1.0);

/// Least-squares slope of log(values) against log(deltas).
double log_log_slope(std::span<const double> deltas, std::span<const double> values);

}  // namespace chainkit
