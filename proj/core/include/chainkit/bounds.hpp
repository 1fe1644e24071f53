#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "chainkit/chaining.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/metric_space.hpp"

namespace chainkit {

/// Moment constants (M, p, q) of the increment condition
/// E d(X_x, X_y)^p <= M d(x, y)^q, entropy constants (C, t), the Hölder
/// order beta and the diameter of the ambient parameter set.
struct BoundParams {
  double M = 1.0;
  double p = 2.0;
  double q = 2.0;
  double C = 1.0;
  double t = 1.0;
  double beta = 0.25;
  double diam = 1.0;

  /// Throws ParamViolation unless M, p, q, C, t > 0 and q > t.
  void validate_moment_entropy() const;
  /// Additionally requires 0 < beta < (q - t)/p and diam > 0.
  void validate() const;
};

/// Which power of 4 multiplies the modulus bound.
enum class LemmaConstant {
  Statement,  ///< 4^(t + 2p + 3q + 2)
  Proof,      ///< 4^(2p + 4q + 2), the constant used when the bound is applied inside the Hölder estimate
};

double lemma_b27_prefactor(const BoundParams& params, LemmaConstant constant = LemmaConstant::Statement);

/// 4^(...) M (N4 [ln N4]^q delta^q + C delta^(q-t) / (2^((q-t)/p) - 1)^p),
/// with N4 = N(space, delta/4) supplied by the caller. Throws InvalidDelta
/// for delta <= 0.
double lemma_b27_bound(std::size_t n4, double delta, const BoundParams& params,
                       LemmaConstant constant = LemmaConstant::Statement);

/// Same bound with N4 computed on `space`.
double lemma_b27_bound(const FiniteMetricSpace& space, double delta, const BoundParams& params,
                       NetMode mode = NetMode::Auto, LemmaConstant constant = LemmaConstant::Statement,
                       std::size_t exact_limit = kDefaultExactLimit);

/// Net cardinalities keyed by dyadic level.
using LevelCards = std::map<int, std::size_t>;

/// M (sum_{k=n}^{n1-1} card[k+1]^(1/p) / 2^(kq/p))^p. Throws EmptyRange if
/// n >= n1 and BadParameters for a missing or zero cardinality.
double chaining_sum_bound(const LevelCards& cards, int n, int n1, double M, double p, double q);

/// Closed-form bound on E sup_x d(X_x, X_{phi_n(x)})^p under the entropy
/// condition, in three cases: n1 <= 0, n < 0 < n1, n >= 0.
/// Throws InvalidLevels unless n < n1.
double net_deviation_bound(int n, int n1, const BoundParams& params);

struct HolderConstant {
  double L = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  int k0 = 1;
  int terms_used = 0;
  double tail_bound = 0.0;  ///< analytic majorant of the truncated L1 series tail
};

/// L = L1 + L2, the expected-Hölder-quotient constant. L1 is a polylog-times-
/// geometric series summed until 20 consecutive terms fall below tol * sum
/// and a geometric majorant of the remaining tail does too; L2 is closed form.
/// Throws NonconvergentLog if C 2^((k0+1)t) < 1.
HolderConstant holder_constant(const BoundParams& params, double tol = 1e-12);

/// L delta^(beta p).
double corollary_bound(double L, double delta, double beta, double p);

struct LemmaLevels {
  int n0 = 0;
  int n1 = 0;
  int n2 = 0;  ///< max{n : delta <= 2^(-n+2)}
  int n3 = 0;  ///< min(n1, n2)
  int r_bar = 1;  ///< max(1, ceil(log2 N4))
  std::size_t n4 = 1;  ///< N(space, delta/4)
};

/// Level bookkeeping for the modulus bound; std::nullopt when delta is below
/// the minimal gap (the strict pair set at scale delta is empty).
std::optional<LemmaLevels> lemma_b27_levels(const FiniteMetricSpace& space, double delta,
                                            NetMode mode = NetMode::Auto,
                                            std::size_t exact_limit = kDefaultExactLimit);

/// Smallest r >= 1 with 2^r >= count.
int ceil_log2_at_least_one(std::size_t count);

}  // namespace chainkit
