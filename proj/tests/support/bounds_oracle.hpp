#pragma once

// 50-digit evaluation of the bound formulas, written directly from their
// closed forms without sharing code with the library.

#include <cstddef>
#include <map>
#include <stdexcept>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace chainkit::oracle {

using Real = boost::multiprecision::cpp_dec_float_50;

struct Params {
  Real M, p, q, C, t, beta, diam;
};

inline Real two_pow(const Real& x) { return boost::multiprecision::pow(Real(2), x); }

inline Real lemma_bound(std::size_t n4, const Real& delta, const Params& P, bool proof_constant = false) {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  const Real exponent = proof_constant ? Real(2 * P.p + 4 * P.q + 2) : Real(P.t + 2 * P.p + 3 * P.q + 2);
  const Real N = Real(n4);
  const Real first = n4 == 1 ? Real(0) : N * pow(log(N), P.q) * pow(delta, P.q);
  const Real second = P.C * pow(delta, P.q - P.t) / pow(two_pow((P.q - P.t) / P.p) - 1, P.p);
  return pow(Real(4), exponent) * P.M * (first + second);
}

inline Real chaining_sum(const std::map<int, std::size_t>& cards, int n, int n1, const Real& M, const Real& p,
                         const Real& q) {
  using boost::multiprecision::pow;
  Real s = 0;
  for (int k = n; k < n1; ++k) s += pow(Real(cards.at(k + 1)), 1 / p) / two_pow(Real(k) * q / p);
  return M * pow(s, p);
}

inline Real net_deviation(int n, int n1, const Params& P) {
  using boost::multiprecision::pow;
  const Real g = P.q - P.t;
  const Real base = two_pow(g / P.p) - 1;
  if (n1 <= 0) return P.M * P.C * two_pow(P.t) * two_pow(Real(1 - n) * g) / pow(base, P.p);
  if (n < 0) return P.M * P.C * two_pow(P.t) * pow((two_pow(Real(1 - n) * g / P.p) + two_pow(g / P.p)) / base, P.p);
  return P.M * P.C * two_pow(P.q) * two_pow(-Real(n) * g) / pow(base, P.p);
}

struct Holder {
  Real L, L1, L2;
  int k0;
};

/// Sums the L1 series until a term falls below 1e-30 of the running sum;
/// the terms are eventually decreasing with ratio tending to
/// 2^(beta p - (q - t)), so the remainder is far below 1e-20 relative.
inline Holder holder(const Params& P) {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  int k0 = 1;
  while ((P.diam + 1) / two_pow(Real(k0 + 1)) > P.diam) ++k0;
  const Real g = P.q - P.t;
  const Real den = pow(two_pow(g / P.p) - 1, P.p);
  const Real lead = pow(Real(4), 2 * P.p + 5 * P.q + 2) * P.M * pow(P.diam + 1, P.q) / den;
  const Real rho = two_pow(P.beta * P.p - g);
  Real sum = 0;
  for (int k = k0;; ++k) {
    const Real lg = log(P.C * two_pow(Real(k + 1) * P.t));
    const Real term = two_pow((P.beta * P.p - g) * k) * (pow(Real(4), P.t) * pow(lg, P.q) * den + 1);
    sum += term;
    if (k > k0 + 50 && term < Real("1e-30") * sum) break;
    if (k > k0 + 200000) throw std::runtime_error("oracle series did not settle");
  }
  Holder h;
  h.k0 = k0;
  h.L1 = lead * P.C * sum;
  h.L2 = lead * P.C * rho / (1 - rho);
  h.L = h.L1 + h.L2;
  return h;
}

}  // namespace chainkit::oracle
