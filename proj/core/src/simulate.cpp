#include "chainkit/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "chainkit/error.hpp"
#include "chainkit/parallel.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "simulate";
constexpr std::array<double, 4> kJitterSchedule{0.0, 1e-12, 1e-10, 1e-8};
constexpr std::uint64_t kMaxReplicationsPerStream = std::uint64_t{1} << 40;

const Eigen::MatrixXd& require_coords(const FiniteMetricSpace& space) {
  if (!space.coords()) throw Error(ErrorKind::BadParameters, kModule, "simulation needs point coordinates");
  return *space.coords();
}

double double_factorial_odd(int k) {  // (2k - 1)!! = E Z^(2k)
  double v = 1.0;
  for (int i = 2 * k - 1; i > 1; i -= 2) v *= i;
  return v;
}

double chi2_ramp_moment(double p) {
  const double rounded = std::round(p);
  if (rounded != p || rounded < 2 || static_cast<long>(rounded) % 2 != 0)
    throw Error(ErrorKind::BadParameters, kModule, "chi2 ramp certificates exist for even integer p only");
  const int m = static_cast<int>(rounded);
  // E (Z^2 - 1)^m = sum_j C(m, j) E Z^(2j) (-1)^(m-j)
  double total = 0.0, binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) binom = binom * (m - j + 1) / j;
    total += binom * double_factorial_odd(j) * (((m - j) % 2) ? -1.0 : 1.0);
  }
  return total / std::pow(2.0, m / 2.0);
}

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw Error(ErrorKind::BadParameters, kModule, "Hurst index must lie in (0, 1)");
}

void check_replications(std::size_t R) {
  if (R < 1) throw Error(ErrorKind::BadParameters, kModule, "need at least one replication");
  if (R >= kMaxReplicationsPerStream) throw Error(ErrorKind::BadParameters, kModule, "too many replications");
}

}  // namespace

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::FBM: return "fbm";
    case ProcessKind::Chi2Ramp: return "chi2_ramp";
  }
  return "fbm";
}

ProcessKind process_kind_from_string(const std::string& name) {
  if (name == "fbm" || name == "bm") return ProcessKind::FBM;
  if (name == "chi2_ramp") return ProcessKind::Chi2Ramp;
  throw Error(ErrorKind::InputError, kModule, "unknown process kind '" + name + "'");
}

double gaussian_abs_moment(double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "moment order must be positive");
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

MomentCertificate certificate_for(const ProcessSpec& process, double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "moment order must be positive");
  switch (process.kind) {
    case ProcessKind::FBM:
      check_hurst(process.H);
      return {gaussian_abs_moment(p), p, p * process.H, true};
    case ProcessKind::Chi2Ramp:
      return {chi2_ramp_moment(p), p, p, false};
  }
  return {};
}

GaussianFieldSampler::GaussianFieldSampler(const FiniteMetricSpace& space, double H) {
  check_hurst(H);
  const auto& X = require_coords(space);
  const Eigen::Index n = X.rows();
  const double two_h = 2.0 * H;
  Eigen::VectorXd radial(n);
  for (Eigen::Index i = 0; i < n; ++i) radial(i) = std::pow(X.row(i).norm(), two_h);
  covariance_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double c = 0.5 * (radial(i) + radial(j) - std::pow(space.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), two_h));
      covariance_(i, j) = c;
      covariance_(j, i) = c;
    }
  const double scale = covariance_.diagonal().maxCoeff();
  if (!(scale > 0.0)) {
    factor_ = Eigen::MatrixXd::Zero(n, n);  // every point at the origin
    return;
  }

  for (double relative : kJitterSchedule) {
    Eigen::MatrixXd A = covariance_;
    const double jitter = relative * scale;
    for (Eigen::Index i = 0; i < n; ++i)
      if (A(i, i) > 0.0) A(i, i) += jitter;  // pinned points stay exactly zero
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success) continue;
    Eigen::VectorXd D = ldlt.vectorD();
    if (D.minCoeff() < -1e-14 * scale) continue;
    D = D.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd L = ldlt.matrixL();
    Eigen::MatrixXd scaled = L * D.asDiagonal();
    // covariance = P^T L D L^T P
    factor_ = ldlt.transpositionsP().transpose() * scaled;
    jitter_ = jitter;
    return;
  }
  throw Error(ErrorKind::FactorizationFailure, kModule, "covariance is indefinite beyond the jitter schedule");
}

void GaussianFieldSampler::sample(Philox4x32& engine, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  accumulate(engine, out);
}

void GaussianFieldSampler::accumulate(Philox4x32& engine, std::span<double> out) const {
  const Eigen::Index n = factor_.rows();
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(engine);
  Eigen::Map<Eigen::VectorXd> target(out.data(), n);
  target.noalias() += factor_ * z;
}

namespace {

// Draws one summand path of `process` into `out` (accumulating).
class SummandSource {
 public:
  SummandSource(const FiniteMetricSpace& space, const ProcessSpec& process) : process_(process) {
    const auto& X = require_coords(space);
    if (process.kind == ProcessKind::FBM) {
      sampler_.emplace(space, process.H);
    } else {
      radius_.resize(static_cast<std::size_t>(X.rows()));
      for (Eigen::Index i = 0; i < X.rows(); ++i) radius_[static_cast<std::size_t>(i)] = X.row(i).norm();
    }
  }

  void accumulate(Philox4x32& engine, std::span<double> out) const {
    if (sampler_) {
      sampler_->accumulate(engine, out);
      return;
    }
    std::normal_distribution<double> normal;
    const double z = normal(engine);
    const double xi = (z * z - 1.0) / std::numbers::sqrt2;
    for (std::size_t i = 0; i < radius_.size(); ++i) out[i] += xi * radius_[i];
  }

 private:
  ProcessSpec process_;
  std::optional<GaussianFieldSampler> sampler_;
  std::vector<double> radius_;
};

PathEnsemble make_ensemble(const FiniteMetricSpace& space, const ProcessSpec& process, std::size_t R,
                           std::uint64_t seed, std::size_t summands) {
  PathEnsemble ens;
  ens.space_id = space.fingerprint();
  ens.R = R;
  ens.n = space.size();
  ens.d = 1;
  ens.seed = seed;
  ens.process = process;
  ens.summands = summands;
  ens.values.assign(R * ens.n, 0.0);
  return ens;
}

}  // namespace

PathEnsemble simulate_process(const FiniteMetricSpace& space, const ProcessSpec& process, std::size_t R,
                              std::uint64_t seed) {
  check_replications(R);
  const SummandSource source(space, process);
  PathEnsemble ens = make_ensemble(space, process, R, seed, 0);
  parallel_for(R, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Philox4x32 engine(seed, r);
      source.accumulate(engine, ens.path(r));
    }
  });
  return ens;
}

FieldSimulation simulate_fbm_field(const FiniteMetricSpace& space, double H, std::size_t R, std::uint64_t seed,
                                   double p) {
  const ProcessSpec process{ProcessKind::FBM, H};
  return {simulate_process(space, process, R, seed), certificate_for(process, p)};
}

std::uint64_t partial_sum_stream(std::size_t n, std::size_t r) {
  return (static_cast<std::uint64_t>(n) << 40) | static_cast<std::uint64_t>(r);
}

std::map<std::size_t, PathEnsemble> simulate_partial_sums(const FiniteMetricSpace& space,
                                                          const ProcessSpec& process,
                                                          std::span<const std::size_t> n_values,
                                                          std::size_t R, std::uint64_t seed) {
  check_replications(R);
  const SummandSource source(space, process);
  std::map<std::size_t, PathEnsemble> out;
  for (std::size_t n : n_values) {
    if (n < 1 || n >= (std::size_t{1} << 23))
      throw Error(ErrorKind::BadParameters, kModule, "partial sum length must be in [1, 2^23)");
    if (out.contains(n)) continue;
    PathEnsemble ens = make_ensemble(space, process, R, seed, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    parallel_for(R, [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        Philox4x32 engine(seed, partial_sum_stream(n, r));
        auto path = ens.path(r);
        for (std::size_t i = 0; i < n; ++i) source.accumulate(engine, path);
        for (double& v : path) v *= scale;
      }
    });
    out.emplace(n, std::move(ens));
  }
  return out;
}

}  // namespace chainkit
