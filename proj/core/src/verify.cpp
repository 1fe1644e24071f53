#include "chainkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "chainkit/chaining.hpp"
#include "chainkit/error.hpp"
#include "chainkit/pair_reduction.hpp"
#include "chainkit/parallel.hpp"

namespace chainkit {
namespace {

constexpr const char* kModule = "verify";
constexpr double kDecompositionSlack = 1e-12;

void require_ensemble(const FiniteMetricSpace& space, const PathEnsemble& ens) {
  if (ens.n != space.size())
    throw Error(ErrorKind::InputError, kModule,
                "ensemble has " + std::to_string(ens.n) + " points, space has " + std::to_string(space.size()));
  if (ens.R == 0) throw Error(ErrorKind::InputError, kModule, "ensemble has no replications");
  if (ens.values.size() != ens.R * ens.n * ens.d)
    throw Error(ErrorKind::InputError, kModule, "ensemble value count does not match R * n * d");
}

// Fills out[r] = stat(path r) in parallel; each worker writes only its own slots.
template <class Stat>
std::vector<double> per_replication(const PathEnsemble& ens, Stat&& stat) {
  std::vector<double> out(ens.R);
  parallel_for(ens.R, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) out[r] = stat(ens.path(r));
  });
  return out;
}

double sup_over(const PointPairs& pairs, std::span<const double> path, std::size_t d) {
  double best = 0.0;
  for (const auto& [i, j] : pairs) best = std::max(best, value_distance(path, d, i, j));
  return best;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

MCEstimate summarize(std::span<const double> samples, std::string statistic) {
  MCEstimate est;
  est.statistic = std::move(statistic);
  est.R = samples.size();
  if (samples.empty()) return est;
  est.mean = pairwise_sum(samples) / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    std::transform(samples.begin(), samples.end(), sq.begin(), [&](double v) {
      const double dv = v - est.mean;
      return dv * dv;
    });
    const double var = pairwise_sum(sq) / static_cast<double>(samples.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return est;
}

VerificationReport make_report(std::string statistic, MCEstimate estimate, double bound, double delta,
                               double beta) {
  VerificationReport rep;
  rep.statistic = std::move(statistic);
  rep.delta = delta;
  rep.beta = beta;
  rep.estimate = std::move(estimate);
  rep.bound = bound;
  const double mean = rep.estimate.mean;
  const double se = rep.estimate.std_error;
  if (se > 0.0) {
    rep.margin = (bound - mean) / se;
  } else {
    rep.margin = mean <= bound ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  const double upper = mean + kPassSigmas * se;
  rep.pass = upper <= bound;
  rep.near_bound = rep.pass && upper > 0.0 && bound < 2.0 * upper;
  return rep;
}

PointPairs pairs_within(const FiniteMetricSpace& space, double delta) {
  PointPairs out;
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space.distance(i, j) <= delta) out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  return out;
}

double empirical_modulus(const FiniteMetricSpace& space, std::span<const double> path, std::size_t dim,
                         double delta) {
  if (path.size() < space.size() * dim)
    throw Error(ErrorKind::MissingValue, kModule, "path shorter than the space");
  return sup_over(pairs_within(space, delta), path, dim);
}

SupEstimate estimate_sup_increment_moment(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                          double delta, double p) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidDelta, kModule, "delta must be positive");
  if (!(p > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "p must be positive");
  require_ensemble(space, ens);
  const std::string name = "sup_increment_moment";
  const auto pairs = pairs_within(space, delta);
  if (pairs.empty()) {
    SupEstimate out;
    out.estimate.statistic = name;
    out.estimate.R = ens.R;
    out.empty_pairs = true;
    return out;
  }
  const auto samples = per_replication(ens, [&](std::span<const double> path) {
    return std::pow(sup_over(pairs, path, ens.d), p);
  });
  return {summarize(samples, name), false};
}

MCEstimate estimate_holder_quotient_moment(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                           double beta, double p) {
  if (space.size() < 2) throw Error(ErrorKind::TooFewPoints, kModule, "need at least two points");
  if (!(p > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "p must be positive");
  require_ensemble(space, ens);
  struct Weighted {
    std::uint32_t i, j;
    double scale;  // d(i, j)^-beta
  };
  std::vector<Weighted> pairs;
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j)
      pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                       std::pow(space.distance(i, j), -beta)});
  const auto samples = per_replication(ens, [&](std::span<const double> path) {
    double best = 0.0;
    for (const auto& w : pairs) best = std::max(best, value_distance(path, ens.d, w.i, w.j) * w.scale);
    return std::pow(best, p);
  });
  return summarize(samples, "holder_quotient_moment");
}

BoundParams bound_params(const MomentCertificate& cert, const EntropyParams& entropy, double beta, double diam) {
  BoundParams b;
  b.M = cert.M;
  b.p = cert.p;
  b.q = cert.q;
  b.C = entropy.C;
  b.t = entropy.t;
  b.beta = beta;
  b.diam = diam;
  b.validate();
  return b;
}

std::vector<VerificationReport> verify_corollary(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                                 const MomentCertificate& cert, const EntropyParams& entropy,
                                                 double beta, std::span<const double> deltas, double tol) {
  const auto params = bound_params(cert, entropy, beta, space.diameter());
  const auto L = holder_constant(params, tol);
  std::vector<VerificationReport> out;
  for (double delta : deltas) {
    const auto sup = estimate_sup_increment_moment(space, ens, delta, cert.p);
    auto rep = make_report("corollary", sup.estimate, corollary_bound(L.L, delta, beta, cert.p), delta, beta);
    rep.empty_pairs = sup.empty_pairs;
    rep.details["L"] = L.L;
    rep.details["L1"] = L.L1;
    rep.details["L2"] = L.L2;
    out.push_back(std::move(rep));
  }
  return out;
}

VerificationReport verify_holder(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                 const MomentCertificate& cert, const EntropyParams& entropy, double beta,
                                 double tol) {
  const auto params = bound_params(cert, entropy, beta, space.diameter());
  const auto L = holder_constant(params, tol);
  auto rep = make_report("holder", estimate_holder_quotient_moment(space, ens, beta, cert.p), L.L, 0.0, beta);
  rep.details["L1"] = L.L1;
  rep.details["L2"] = L.L2;
  rep.details["k0"] = L.k0;
  return rep;
}

VerificationReport verify_lemma_b27(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                    const MomentCertificate& cert, const EntropyParams& entropy, double delta,
                                    const LemmaCheckOptions& options) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidDelta, kModule, "delta must be positive");
  require_ensemble(space, ens);
  BoundParams params;
  params.M = cert.M;
  params.p = cert.p;
  params.q = cert.q;
  params.C = entropy.C;
  params.t = entropy.t;
  params.diam = space.diameter();
  params.validate_moment_entropy();

  const auto levels = lemma_b27_levels(space, delta, options.mode, options.exact_limit);
  if (!levels) {
    MCEstimate zero;
    zero.statistic = "sup_increment_moment";
    zero.R = ens.R;
    auto rep = make_report("lemma_b27", zero,
                           lemma_b27_bound(space, delta, params, options.mode, options.constant, options.exact_limit),
                           delta);
    rep.empty_pairs = true;
    if (options.pathwise) rep.details["decomposition_violations"] = 0.0;
    return rep;
  }

  const auto sup = estimate_sup_increment_moment(space, ens, delta, cert.p);
  auto rep = make_report("lemma_b27", sup.estimate, lemma_b27_bound(levels->n4, delta, params, options.constant),
                         delta);
  rep.empty_pairs = sup.empty_pairs;
  rep.details["n0"] = levels->n0;
  rep.details["n1"] = levels->n1;
  rep.details["n2"] = levels->n2;
  rep.details["n3"] = levels->n3;
  rep.details["r_bar"] = levels->r_bar;
  rep.details["N4"] = static_cast<double>(levels->n4);
  rep.details["prefactor"] = lemma_b27_prefactor(params, options.constant);

  if (options.pathwise) {
    // Split x -> phi(x) -> phi(y) -> y at level n3. Projections move points
    // by less than 2^(-n3+1), so projected pairs lie within c = 2^(-n3+3) and
    // are dominated by the pair set built on the net at that scale.
    const auto family = build_chaining_family(space, options.mode, options.exact_limit);
    const int level = std::max(levels->n3, family.n0());
    const auto& net = family.net(level);
    const auto& phi = family.map(level);
    const double c = std::ldexp(1.0, -level + 3);
    const int r = std::max(levels->r_bar, ceil_log2_at_least_one(net.size()));
    const auto reduction = build_pair_set(space, net, 2.0, r, c);
    const auto pairs = pairs_within(space, delta);
    const auto violations = per_replication(ens, [&](std::span<const double> path) {
      const double lhs = sup_over(pairs, path, ens.d);
      double u = 0.0;
      for (const auto& [a, b] : reduction.pairs) u = std::max(u, value_distance(path, ens.d, a, b));
      double dev = 0.0;
      for (std::size_t x = 0; x < space.size(); ++x) dev = std::max(dev, value_distance(path, ens.d, x, phi[x]));
      const double rhs = 2.0 * u + 2.0 * dev;
      return lhs > rhs * (1.0 + kDecompositionSlack) ? 1.0 : 0.0;
    });
    rep.details["decomposition_level"] = level;
    rep.details["pair_set_size"] = static_cast<double>(reduction.pairs.size());
    rep.details["decomposition_violations"] = std::accumulate(violations.begin(), violations.end(), 0.0);
  }
  return rep;
}

WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

const TightnessEntry& TightnessTable::at(std::size_t n, double delta, double epsilon) const {
  for (const auto& e : entries)
    if (e.n == n && e.delta == delta && e.epsilon == epsilon) return e;
  throw Error(ErrorKind::InputError, kModule, "no tightness entry for the requested cell");
}

const TightnessEntry& TightnessTable::max_over_n(double delta, double epsilon) const {
  const TightnessEntry* best = nullptr;
  for (const auto& e : entries)
    if (e.delta == delta && e.epsilon == epsilon && (!best || e.probability > best->probability)) best = &e;
  if (!best) throw Error(ErrorKind::InputError, kModule, "no tightness entry for the requested cell");
  return *best;
}

TightnessTable tightness_table(const FiniteMetricSpace& space, const std::map<std::size_t, PathEnsemble>& ensembles,
                               std::span<const double> deltas, std::span<const double> epsilons) {
  if (ensembles.empty() || deltas.empty() || epsilons.empty())
    throw Error(ErrorKind::EmptyGrid, kModule, "tightness grids must be nonempty");
  TightnessTable table;
  for (const auto& [n, ens] : ensembles) {
    require_ensemble(space, ens);
    for (double delta : deltas) {
      const auto pairs = pairs_within(space, delta);
      const auto modulus = per_replication(ens, [&](std::span<const double> path) {
        return sup_over(pairs, path, ens.d);
      });
      for (double eps : epsilons) {
        TightnessEntry e;
        e.n = n;
        e.delta = delta;
        e.epsilon = eps;
        e.R = ens.R;
        e.hits = static_cast<std::size_t>(std::count_if(modulus.begin(), modulus.end(), [&](double w) { return w >= eps; }));
        e.probability = static_cast<double>(e.hits) / static_cast<double>(e.R);
        e.ci = wilson_interval(e.hits, e.R);
        table.entries.push_back(e);
      }
    }
  }
  return table;
}

MonotonicityCheck check_tightness_monotone(const TightnessTable& table, std::span<const double> deltas,
                                           double epsilon) {
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    const auto& coarse = table.max_over_n(sorted[k], epsilon);
    const auto& fine = table.max_over_n(sorted[k + 1], epsilon);
    if (fine.ci.lo > coarse.ci.hi) return {false, sorted[k], sorted[k + 1]};
  }
  return {};
}

bool CltMomentChain::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; }) &&
         std::all_of(identity.begin(), identity.end(), [](const auto& c) { return c.pass; });
}

CltMomentChain verify_clt_moment_chain(const FiniteMetricSpace& space,
                                       const std::map<std::size_t, PathEnsemble>& ensembles,
                                       const MomentCertificate& base) {
  if (base.p != 2.0) throw Error(ErrorKind::WrongOrder, kModule, "the moment chain needs p = 2");
  if (ensembles.empty()) throw Error(ErrorKind::EmptyGrid, kModule, "no partial-sum ensembles");
  for (const auto& [n, ens] : ensembles) require_ensemble(space, ens);

  CltMomentChain out;
  const std::size_t npts = space.size();
  for (std::size_t i = 0; i < npts; ++i) {
    for (std::size_t j = i + 1; j < npts; ++j) {
      const double d = space.distance(i, j);
      const double base_moment = base.M * std::pow(d, base.q);
      std::optional<MCEstimate> worst;
      for (const auto& [n, ens] : ensembles) {
        std::vector<double> sq(ens.R);
        for (std::size_t r = 0; r < ens.R; ++r) {
          const double v = value_distance(ens.path(r), ens.d, i, j);
          sq[r] = v * v;
        }
        auto est = summarize(sq, "partial_sum_increment_moment");
        if (base.exact) {
          IdentityCheck c;
          c.i = i;
          c.j = j;
          c.n = n;
          c.mean = est.mean;
          c.std_error = est.std_error;
          c.expected = base_moment;
          c.pass = std::abs(est.mean - base_moment) <= kIdentitySigmas * est.std_error;
          out.identity.push_back(c);
        }
        if (!worst || est.mean > worst->mean) worst = std::move(est);
      }
      auto rep = make_report("clt_factor4", *worst, 4.0 * base_moment, d);
      rep.details["i"] = static_cast<double>(i);
      rep.details["j"] = static_cast<double>(j);
      out.reports.push_back(std::move(rep));
    }
  }
  return out;
}

std::vector<CertificateCheck> check_certificate(const FiniteMetricSpace& space, const PathEnsemble& ens,
                                                const MomentCertificate& cert) {
  require_ensemble(space, ens);
  std::vector<CertificateCheck> out;
  std::vector<double> samples(ens.R);
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      for (std::size_t r = 0; r < ens.R; ++r) samples[r] = std::pow(value_distance(ens.path(r), ens.d, i, j), cert.p);
      const auto est = summarize(samples, "increment_moment");
      const double scale = cert.M * std::pow(space.distance(i, j), cert.q);
      CertificateCheck c;
      c.i = i;
      c.j = j;
      c.ratio = est.mean / scale;
      c.ratio_se = est.std_error / scale;
      c.pass = cert.exact ? std::abs(c.ratio - 1.0) <= kIdentitySigmas * c.ratio_se
                          : c.ratio <= 1.0 + kIdentitySigmas * c.ratio_se;
      out.push_back(c);
    }
  }
  return out;
}

double ks_distance_normal(std::vector<double> samples, double sd) {
  if (samples.empty()) throw Error(ErrorKind::InputError, kModule, "no samples");
  if (!(sd > 0.0)) throw Error(ErrorKind::BadParameters, kModule, "sd must be positive");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double F = normal_cdf(samples[k] / sd);
    worst = std::max({worst, F - static_cast<double>(k) / n, static_cast<double>(k + 1) / n - F});
  }
  return worst;
}

double log_log_slope(std::span<const double> deltas, std::span<const double> values) {
  if (deltas.size() != values.size() || deltas.size() < 2)
    throw Error(ErrorKind::InputError, kModule, "slope needs at least two matching points");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0) || !(values[k] > 0.0))
      throw Error(ErrorKind::InputError, kModule, "log-log slope needs positive values");
    x.push_back(std::log(deltas[k]));
    y.push_back(std::log(values[k]));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InputError, kModule, "deltas must not all coincide");
  return sxy / sxx;
}

}  // namespace chainkit
