#include "chainkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chainkit/error.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "bounds";

constexpr int kMinQuietTerms = 20;
constexpr int kMaxSeriesTerms = 10'000'000;

double denominator(const BoundParams& b) { return std::pow(std::exp2((b.q - b.t) / b.p) - 1.0, b.p); }

}  // namespace

void BoundParams::validate_moment_entropy() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(M) || !positive(p) || !positive(q) || !positive(C) || !positive(t))
    throw Error(ErrorKind::ParamViolation, kModule, "M, p, q, C and t must be positive and finite");
  if (!(q > t))
    throw Error(ErrorKind::ParamViolation, kModule,
                "need q > t (q = " + std::to_string(q) + ", t = " + std::to_string(t) + ")");
}

void BoundParams::validate() const {
  validate_moment_entropy();
  if (!(beta > 0.0 && beta < (q - t) / p))
    throw Error(ErrorKind::ParamViolation, kModule,
                "beta must lie in (0, (q - t)/p) = (0, " + std::to_string((q - t) / p) + ")");
  if (!(diam > 0.0) || !std::isfinite(diam))
    throw Error(ErrorKind::ParamViolation, kModule, "diameter of the parameter set must be positive");
}

double lemma_b27_prefactor(const BoundParams& b, LemmaConstant constant) {
  const double exponent =
      constant == LemmaConstant::Statement ? b.t + 2.0 * b.p + 3.0 * b.q + 2.0 : 2.0 * b.p + 4.0 * b.q + 2.0;
  return std::pow(4.0, exponent);
}

double lemma_b27_bound(std::size_t n4, double delta, const BoundParams& b, LemmaConstant constant) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidDelta, kModule, "delta must be positive");
  if (n4 < 1) throw Error(ErrorKind::BadParameters, kModule, "covering number must be >= 1");
  b.validate_moment_entropy();
  const double N = static_cast<double>(n4);
  const double net_term = n4 == 1 ? 0.0 : N * std::pow(std::log(N), b.q) * std::pow(delta, b.q);
  const double entropy_term = b.C * std::pow(delta, b.q - b.t) / denominator(b);
  return lemma_b27_prefactor(b, constant) * b.M * (net_term + entropy_term);
}

double lemma_b27_bound(const FiniteMetricSpace& space, double delta, const BoundParams& b, NetMode mode,
                       LemmaConstant constant, std::size_t exact_limit) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidDelta, kModule, "delta must be positive");
  const auto n4 = covering_number(space, delta / 4.0, mode, exact_limit).count;
  return lemma_b27_bound(n4, delta, b, constant);
}

double chaining_sum_bound(const LevelCards& cards, int n, int n1, double M, double p, double q) {
  if (n >= n1) throw Error(ErrorKind::EmptyRange, kModule, "need n < n1");
  if (!(p > 0.0) || !(M > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "M and p must be positive");
  double sum = 0.0;
  for (int k = n; k < n1; ++k) {
    const auto it = cards.find(k + 1);
    if (it == cards.end() || it->second < 1)
      throw Error(ErrorKind::BadParameters, kModule, "missing cardinality for level " + std::to_string(k + 1));
    sum += std::pow(static_cast<double>(it->second), 1.0 / p) * std::exp2(-k * q / p);
  }
  return M * std::pow(sum, p);
}

double net_deviation_bound(int n, int n1, const BoundParams& b) {
  if (n >= n1) throw Error(ErrorKind::InvalidLevels, kModule, "need n < n1");
  b.validate_moment_entropy();
  const double gap = b.q - b.t;
  const double ratio = std::exp2(gap / b.p);
  const double den = std::pow(ratio - 1.0, b.p);
  if (n1 <= 0) return b.M * b.C * std::exp2(b.t) * std::exp2((1.0 - n) * gap) / den;
  if (n < 0) {
    const double inner = (std::exp2((1.0 - n) * gap / b.p) + ratio) / (ratio - 1.0);
    return b.M * b.C * std::exp2(b.t) * std::pow(inner, b.p);
  }
  return b.M * b.C * std::exp2(b.q) * std::exp2(-n * gap) / den;
}

HolderConstant holder_constant(const BoundParams& b, double tol) {
  b.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "tolerance must be positive");

  HolderConstant out;
  // k0 = min{k >= 1 : 2^-(k+1) (diam + 1) <= diam}
  int k0 = 1;
  while (std::ldexp(b.diam + 1.0, -(k0 + 1)) > b.diam) ++k0;
  out.k0 = k0;
  if (b.C * std::exp2((k0 + 1) * b.t) < 1.0)
    throw Error(ErrorKind::NonconvergentLog, kModule,
                "C 2^((k0+1)t) < 1: the entropy constants are inconsistent with covering numbers >= 1");

  const double gap = b.q - b.t;
  const double den = denominator(b);
  const double lead = std::pow(4.0, 2.0 * b.p + 5.0 * b.q + 2.0) * b.M * std::pow(b.diam + 1.0, b.q) / den;
  const double log_exponent = b.beta * b.p - gap;  // < 0
  const double rho = std::exp2(log_exponent);
  const double sigma = std::exp2(log_exponent / 2.0);
  const double four_t = std::pow(4.0, b.t);
  const double lnC = std::log(b.C);
  const double ln2t = b.t * std::log(2.0);

  auto term = [&](int k) {
    const double lg = std::max(0.0, lnC + (k + 1) * ln2t);
    return std::exp2(log_exponent * k) * (four_t * std::pow(lg, b.q) * den + 1.0);
  };
  // Tail majorant for sum_{k >= K} term(k). With g(k) = (max(0, ln C) + (k+1) t ln 2)^q
  // and h(k) = rho^k (4^t g(k) den + 1), h(k+1)/h(k) <= sigma as soon as
  // g(k+1)/g(k) <= sigma/rho, and the ratio g(k+1)/g(k) decreases in k.
  auto tail = [&](int K) -> double {
    const double a = std::max(0.0, lnC);
    const double g = std::pow(a + (K + 1) * ln2t, b.q);
    const double g_next = std::pow(a + (K + 2) * ln2t, b.q);
    if (g_next / g > sigma / rho) return std::numeric_limits<double>::infinity();
    return std::exp2(log_exponent * K) * (four_t * g * den + 1.0) / (1.0 - sigma);
  };

  double sum = 0.0;
  int quiet = 0;
  int k = k0;
  for (;; ++k) {
    if (k - k0 >= kMaxSeriesTerms)
      throw Error(ErrorKind::NonconvergentLog, kModule, "series did not reach the requested tolerance");
    const double a = term(k);
    sum += a;
    quiet = a < tol * sum ? quiet + 1 : 0;
    if (quiet >= kMinQuietTerms) {
      const double rest = tail(k + 1);
      if (rest < tol * sum) {
        out.tail_bound = lead * b.C * rest;
        break;
      }
    }
  }
  out.terms_used = k - k0 + 1;
  out.L1 = lead * b.C * sum;
  out.L2 = lead * b.C * rho / (1.0 - rho);
  out.L = out.L1 + out.L2;
  return out;
}

double corollary_bound(double L, double delta, double beta, double p) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidDelta, kModule, "delta must be positive");
  return L * std::pow(delta, beta * p);
}

int ceil_log2_at_least_one(std::size_t count) {
  int r = 1;
  while (std::ldexp(1.0, r) < static_cast<double>(count)) ++r;
  return r;
}

std::optional<LemmaLevels> lemma_b27_levels(const FiniteMetricSpace& space, double delta, NetMode mode,
                                            std::size_t exact_limit) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidDelta, kModule, "delta must be positive");
  if (space.size() < 2 || delta < space.min_gap()) return std::nullopt;

  LemmaLevels out;
  const auto levels = dyadic_levels(space);
  out.n0 = levels.n0;
  out.n1 = levels.n1;
  int n2 = static_cast<int>(std::floor(2.0 - std::log2(delta)));
  while (!(delta <= std::ldexp(1.0, -n2 + 2))) --n2;
  while (delta <= std::ldexp(1.0, -(n2 + 1) + 2)) ++n2;
  out.n2 = n2;
  out.n3 = std::min(out.n1, n2);
  out.n4 = covering_number(space, delta / 4.0, mode, exact_limit).count;
  out.r_bar = ceil_log2_at_least_one(out.n4);
  return out;
}

}  // namespace chainkit
