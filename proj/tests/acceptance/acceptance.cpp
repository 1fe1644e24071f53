// Acceptance suite: one PASS/FAIL line per criterion. `--only AC-n` runs a
// single criterion; the exit status is nonzero if any selected one fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chainkit/bounds.hpp"
#include "chainkit/chaining.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/io.hpp"
#include "chainkit/pair_reduction.hpp"
#include "chainkit/pipeline.hpp"
#include "chainkit/simulate.hpp"
#include "chainkit/verify.hpp"
#include "support/bounds_oracle.hpp"
#include "support/naive_cover.hpp"
#include "support/param_grid.hpp"
#include "support/random_spaces.hpp"

using namespace chainkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string id;
  double budget_seconds;
  std::function<Outcome()> run;
};

constexpr std::uint64_t kSeed = 20240611;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

// ---- AC-1: structural properties on the random corpus ----------------------

Outcome structural() {
  std::size_t failures = 0, spaces = 0, dominations = 0;
  std::string first;
  std::mt19937_64 values_rng(7);
  std::normal_distribution<double> z;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };
  for (const auto& cloud : test_support::random_corpus()) {
    const auto& s = cloud.space;
    ++spaces;
    const auto family = build_chaining_family(s, NetMode::Exact);
    const auto fam_report = validate_family(s, family, true);
    if (!fam_report.all_pass())
      for (const auto& c : fam_report.checks)
        if (!c.pass) fail("space " + std::to_string(spaces) + " family " + c.name);

    const int r = ceil_log2_at_least_one(s.size());
    for (double c : {s.diameter() / 2, s.diameter() / 8}) {
      const auto red = build_pair_set(s, 2.0, r, c);
      const auto red_report = validate_reduction(s, red);
      for (const auto& chk : red_report.checks)
        if (!chk.pass) fail("space " + std::to_string(spaces) + " pairs " + chk.name);
      std::vector<double> values(s.size());
      for (int k = 0; k < 100; ++k) {
        for (auto& v : values) v = z(values_rng);
        ++dominations;
        if (!check_domination(s, red, values, 1, c).pass)
          fail("space " + std::to_string(spaces) + " domination");
      }
    }
  }
  return {failures == 0, std::to_string(spaces) + " spaces, " + std::to_string(dominations) +
                             " domination checks, " + std::to_string(failures) + " failures" +
                             (first.empty() ? "" : " (first: " + first + ")")};
}

// ---- Shared Brownian setup for AC-2 and AC-3 --------------------------------

struct BrownianSetup {
  FiniteMetricSpace space = uniform_grid(33);
  FieldSimulation sim;
  EntropyParams entropy;
};

const BrownianSetup& brownian() {
  static const BrownianSetup setup = [] {
    BrownianSetup b;
    b.sim = simulate_fbm_field(b.space, 0.5, 100000, kSeed, 4.0);
    const auto grid = dyadic_eta_grid(b.space);
    b.entropy = fit_entropy_params(b.space, grid, 1.0);
    return b;
  }();
  return setup;
}

const std::vector<double> kDeltas = {0.5, 0.25, 0.125};

Outcome lemma_bound() {
  const auto& b = brownian();
  if (std::abs(b.sim.certificate.M - 3.0) > 3e-12 || b.sim.certificate.q != 2.0)
    return {false, "unexpected certificate M=" + fmt(b.sim.certificate.M) + " q=" + fmt(b.sim.certificate.q)};
  if (!check_entropy(b.space, b.entropy, dyadic_eta_grid(b.space)).holds)
    return {false, "fitted entropy constants do not dominate"};
  Outcome out;
  out.detail = "C=" + fmt(b.entropy.C) + " t=" + fmt(b.entropy.t);
  for (double delta : kDeltas) {
    const auto rep = verify_lemma_b27(b.space, b.sim.ensemble, b.sim.certificate, b.entropy, delta);
    const double violations = rep.details.at("decomposition_violations");
    out.pass = out.pass && rep.pass && !rep.empty_pairs && violations == 0;
    out.detail += "; delta=" + fmt(delta) + " est=" + fmt(rep.estimate.mean) + " bound=" + fmt(rep.bound) +
                  " margin=" + fmt(rep.margin) + (rep.near_bound ? " NEAR" : "") +
                  " violations=" + fmt(violations);
  }
  return out;
}

Outcome corollary() {
  const auto& b = brownian();
  Outcome out;
  for (double beta : {0.1, 0.2}) {
    const auto reps = verify_corollary(b.space, b.sim.ensemble, b.sim.certificate, b.entropy, beta, kDeltas);
    std::vector<double> means;
    for (const auto& rep : reps) {
      out.pass = out.pass && rep.pass;
      means.push_back(rep.estimate.mean);
    }
    const double slope = log_log_slope(kDeltas, means);
    const bool slope_ok = slope >= beta * 4.0 - 0.1;
    out.pass = out.pass && slope_ok;
    out.detail += "beta=" + fmt(beta) + " L=" + fmt(reps.front().bound / std::pow(kDeltas.front(), beta * 4)) +
                  " min margin=" + fmt(std::min({reps[0].margin, reps[1].margin, reps[2].margin})) +
                  " slope=" + fmt(slope) + (slope_ok ? "" : " (too flat)") + "; ";
  }
  auto config = config_from_json(io::read_json(CHAINKIT_BUNDLED_CONFIG));
  config.out_dir = std::string(CHAINKIT_ACCEPTANCE_OUT) + "/bm_corollary";
  const auto result = run_pipeline(config);
  out.pass = out.pass && result.exit_code == kExitPass;
  out.detail += "bundled config exit " + std::to_string(result.exit_code);
  return out;
}

// ---- AC-4 and AC-5: partial sums of i.i.d. Brownian paths -------------------

const std::vector<std::size_t> kNs = {1, 4, 16, 64};

const std::map<std::size_t, PathEnsemble>& partial_sums() {
  static const auto ens = simulate_partial_sums(uniform_grid(33), {ProcessKind::FBM, 0.5}, kNs, 10000, kSeed);
  return ens;
}

Outcome tightness() {
  const auto space = uniform_grid(33);
  const std::vector<double> deltas = {0.5, 0.25, 0.125, 0.0625};
  const std::vector<double> eps = {0.5};
  const auto table = tightness_table(space, partial_sums(), deltas, eps);
  const auto mono = check_tightness_monotone(table, deltas, 0.5);
  const auto& finest = table.max_over_n(0.0625, 0.5);
  Outcome out;
  out.pass = mono.pass && finest.probability < 0.05;
  for (double d : deltas) {
    const auto& e = table.max_over_n(d, 0.5);
    out.detail += "delta=" + fmt(d) + " max_n P=" + fmt(e.probability) + " (n=" + std::to_string(e.n) + ", CI " +
                  fmt(e.ci.lo) + ".." + fmt(e.ci.hi) + "); ";
  }
  out.detail += std::string("monotone ") + (mono.pass ? "yes" : "no");
  if (finest.probability >= 0.05) out.detail += "; finest max " + fmt(finest.probability) + " >= 0.05";
  return out;
}

Outcome clt_chain() {
  const auto space = uniform_grid(33);
  const auto& ens = partial_sums();
  const auto base = certificate_for({ProcessKind::FBM, 0.5}, 2.0);
  const auto chain = verify_clt_moment_chain(space, ens, base);
  std::size_t report_fail = 0, identity_fail = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : chain.reports) {
    report_fail += !r.pass;
    min_margin = std::min(min_margin, r.margin);
  }
  for (const auto& c : chain.identity) identity_fail += !c.pass;
  const auto& s64 = ens.at(64);
  std::vector<double> marginal(s64.R);
  for (std::size_t r = 0; r < s64.R; ++r) marginal[r] = s64.value(r, s64.n - 1);
  const double ks = ks_distance_normal(marginal, 1.0);
  Outcome out;
  out.pass = report_fail == 0 && identity_fail == 0 && !chain.identity.empty() && ks < 0.02;
  out.detail = std::to_string(chain.reports.size()) + " factor-4 reports (" + std::to_string(report_fail) +
               " failing, min margin " + fmt(min_margin) + "), " + std::to_string(chain.identity.size()) +
               " identity checks (" + std::to_string(identity_fail) + " failing), KS(n=64)=" + fmt(ks);
  return out;
}

// ---- AC-6: constants against the 50-digit oracle ----------------------------

Outcome constants() {
  using oracle::Real;
  double worst = 0.0;
  std::string worst_what;
  auto track = [&](double got, const Real& want, const std::string& what) {
    const double w = static_cast<double>(want);
    const double e = std::abs(got - w) / std::abs(w);
    if (!(e <= worst)) {
      worst = std::isnan(e) ? INFINITY : e;
      worst_what = what;
    }
  };
  const std::map<int, std::size_t> cards = {{0, 1}, {1, 2}, {2, 3}, {3, 5}, {4, 9}, {5, 17}};
  std::size_t cases = 0;
  for (const auto& b : test_support::constants_grid()) {
    ++cases;
    const oracle::Params P{Real(b.M), Real(b.p), Real(b.q), Real(b.C), Real(b.t), Real(b.beta), Real(b.diam)};
    const auto name = test_support::describe(b);
    for (double delta : {0.5, 0.125})
      for (std::size_t n4 : {std::size_t{1}, std::size_t{9}}) {
        track(lemma_b27_bound(n4, delta, b), oracle::lemma_bound(n4, Real(delta), P), "lemma " + name);
        track(lemma_b27_bound(n4, delta, b, LemmaConstant::Proof), oracle::lemma_bound(n4, Real(delta), P, true),
              "lemma(proof) " + name);
      }
    for (auto [n, n1] : {std::pair{-3, 0}, std::pair{-2, 3}, std::pair{1, 4}})
      track(net_deviation_bound(n, n1, b), oracle::net_deviation(n, n1, P), "net_deviation " + name);
    track(chaining_sum_bound(cards, 0, 5, b.M, b.p, b.q), oracle::chaining_sum(cards, 0, 5, P.M, P.p, P.q),
          "chaining_sum " + name);
    const auto h = holder_constant(b);
    const auto ho = oracle::holder(P);
    track(h.L, ho.L, "holder " + name);
    track(h.L1, ho.L1, "holder L1 " + name);
    track(h.L2, ho.L2, "holder L2 " + name);
  }
  return {cases == 20 && worst < 1e-10,
          std::to_string(cases) + " cases, worst relative error " + fmt(worst) +
              (worst > 0 ? " (" + worst_what + ")" : "")};
}

// ---- AC-7: covering numbers against exhaustive search ------------------------

Outcome covering() {
  std::size_t instances = 0, greedy_bad = 0, exact_bad = 0;
  for (const auto& cloud : test_support::random_corpus()) {
    const auto& s = cloud.space;
    if (s.size() > 12) continue;
    auto etas = dyadic_eta_grid(s);
    etas.push_back(s.min_gap());
    etas.push_back(0.37 * s.diameter());
    for (double eta : etas) {
      ++instances;
      const auto exact = covering_number_exact(s, eta).count;
      exact_bad += exact != oracle::naive_covering_number(s, eta);
      greedy_bad += covering_number_greedy(s, eta).count < exact;
    }
  }
  return {greedy_bad == 0 && exact_bad == 0,
          std::to_string(instances) + " instances, " + std::to_string(exact_bad) + " exact mismatches, " +
              std::to_string(greedy_bad) + " greedy below exact"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"AC-1", 60, structural},  {"AC-2", 300, lemma_bound}, {"AC-3", 300, corollary},
      {"AC-4", 300, tightness},  {"AC-5", 180, clt_chain},   {"AC-6", 10, constants},
      {"AC-7", 60, covering},
  };
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--only AC-n]\n", argv[0]);
      return 2;
    }
  }
  bool any = false, ok = true;
  for (const auto& c : all) {
    if (!only.empty() && c.id != only) continue;
    any = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    ok = ok && pass;
    std::printf("%s %s [%.2fs/%gs%s] %s\n", c.id.c_str(), pass ? "PASS" : "FAIL", secs, c.budget_seconds,
                in_time ? "" : " over budget", out.detail.c_str());
    std::fflush(stdout);
  }
  if (!any) {
    std::fprintf(stderr, "unknown criterion %s\n", only.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
