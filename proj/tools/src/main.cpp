// chainkit command line: covering, chaining, pair sets, bounds, simulation,
// verification and the end-to-end pipeline.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainkit/bounds.hpp"
#include "chainkit/chaining.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/error.hpp"
#include "chainkit/io.hpp"
#include "chainkit/pair_reduction.hpp"
#include "chainkit/pipeline.hpp"
#include "chainkit/simulate.hpp"
#include "chainkit/verify.hpp"

namespace {

using namespace chainkit;
using nlohmann::json;

constexpr const char* kModule = "cli";

void emit(const json& doc, const std::string& out) {
  if (out.empty()) std::cout << doc.dump(2) << '\n';
  else io::write_json(out, doc);
}

NetMode pick_mode(bool exact, bool greedy) {
  if (exact && greedy) throw Error(ErrorKind::InputError, kModule, "--exact and --greedy are exclusive");
  return exact ? NetMode::Exact : greedy ? NetMode::Greedy : NetMode::Auto;
}

PathEnsemble load_paths(const std::string& path, const FiniteMetricSpace& space) {
  auto ens = io::read_ensemble(path);
  if (ens.space_id != space.fingerprint())
    throw Error(ErrorKind::InputError, kModule, path + " was simulated on a different space");
  if (ens.R < kMinReplications)
    throw Error(ErrorKind::InputError, kModule, "statistical commands need R >= " + std::to_string(kMinReplications));
  return ens;
}

json reports_json(const std::vector<VerificationReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(io::report_to_json(r));
  return arr;
}

struct Options {
  std::string input, out, params, config, kind = "fbm", constant = "statement", nets;
  std::vector<std::string> paths, checks;
  double eta = 0.5, A = 2.0, c = 0.25, delta = 0.25, H = 0.5, tol = 1e-12, p = 2.0;
  int r = 1;
  std::size_t R = 100000, summands = 0, exact_limit = kDefaultExactLimit;
  std::uint64_t seed = 42;
  bool exact = false, greedy = false;
  std::vector<double> deltas = {0.5, 0.25, 0.125}, epsilons = {0.5};
  std::optional<std::size_t> R_override;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainkit: metric entropy, chaining constructions and Monte Carlo checks of moment bounds"};
  app.require_subcommand(1);
  Options o;

  auto* cover = app.add_subcommand("cover", "Internal covering number N(space, eta) with its centres");
  cover->add_option("--input", o.input, "space (JSON or CSV)")->required();
  cover->add_option("--eta", o.eta, "ball radius")->required();
  cover->add_flag("--exact", o.exact, "branch-and-bound minimum cover");
  cover->add_flag("--greedy", o.greedy, "greedy cover (an upper bound)");
  cover->add_option("--exact-limit", o.exact_limit, "largest space solved exactly in auto mode");
  cover->add_option("--out", o.out, "output JSON (default: stdout)");

  auto* chain = app.add_subcommand("chain", "Dyadic nets and projection maps phi_n for levels n0..n1");
  chain->add_option("--input", o.input, "space (JSON or CSV)")->required();
  chain->add_flag("--exact", o.exact, "minimum nets");
  chain->add_flag("--greedy", o.greedy, "greedy nets");
  chain->add_option("--out", o.out, "output JSON (default: stdout)");

  auto* pairs = app.add_subcommand("pairs", "Peeled pair set U dominating all increments at scale c");
  pairs->add_option("--input", o.input, "space (JSON or CSV)")->required();
  pairs->add_option("--A", o.A, "growth base, >= 1");
  pairs->add_option("--r", o.r, "largest radius multiple; A^r must reach the point count")->required();
  pairs->add_option("--c", o.c, "scale")->required();
  pairs->add_option("--out", o.out, "output JSON (default: stdout)");

  auto* bound = app.add_subcommand("bound", "Evaluate the explicit constants");
  bound->require_subcommand(1);
  auto* bound_lemma = bound->add_subcommand("lemma-b27", "Modulus bound for E sup_{d<=delta} increment^p");
  bound_lemma->add_option("--space", o.input, "space (JSON or CSV)")->required();
  bound_lemma->add_option("--delta", o.delta, "scale")->required();
  bound_lemma->add_option("--params", o.params, "params JSON {M,p,q,C,t,beta,diam}")->required();
  bound_lemma->add_option("--constant", o.constant, "statement or proof")->check(CLI::IsMember({"statement", "proof"}));
  bound_lemma->add_flag("--exact", o.exact, "exact N(delta/4)");
  bound_lemma->add_flag("--greedy", o.greedy, "greedy N(delta/4)");
  bound_lemma->add_option("--out", o.out, "output JSON (default: stdout)");
  auto* bound_holder = bound->add_subcommand("holder", "Constant L bounding the expected Hölder quotient");
  bound_holder->add_option("--params", o.params, "params JSON {M,p,q,C,t,beta,diam}")->required();
  bound_holder->add_option("--tol", o.tol, "relative series truncation tolerance");
  bound_holder->add_option("--out", o.out, "output JSON (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "Simulate paths on a space into a binary ensemble");
  simulate->add_option("--kind", o.kind, "fbm, bm or chi2_ramp");
  simulate->add_option("--H", o.H, "Hurst index for fbm");
  simulate->add_option("--space", o.input, "space (JSON or CSV)")->required();
  simulate->add_option("--R", o.R, "replications");
  simulate->add_option("--seed", o.seed, "seed");
  simulate->add_option("--summands", o.summands, "simulate the partial-sum process S_n with this n");
  simulate->add_option("--out", o.out, "output .bin")->required();

  auto* verify = app.add_subcommand("verify", "Monte Carlo checks of the moment bounds");
  verify->require_subcommand(1);
  std::map<std::string, CLI::App*> verify_cmds;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"corollary", "E sup_{d<=delta} increment^p against L delta^(beta p)"},
           {"lemma-b27", "E sup_{d<=delta} increment^p against the modulus bound"},
           {"tightness", "P(w(S_n, delta) >= eps) table over several S_n ensembles"},
           {"clt", "second moments of S_n increments against the factor-4 bound"}}) {
    auto* cmd = verify->add_subcommand(name, help);
    cmd->add_option("--space", o.input, "space (JSON or CSV)")->required();
    cmd->add_option("--paths", o.paths, "ensemble .bin (repeat for tightness/clt)")->required();
    cmd->add_option("--deltas", o.deltas, "comma-separated scales")->delimiter(',');
    cmd->add_option("--out", o.out, "output JSON (default: stdout)");
    if (name != "tightness") cmd->add_option("--params", o.params, "params JSON {M,p,q,C,t,beta,diam}")->required();
    if (name == "tightness") cmd->add_option("--epsilons", o.epsilons, "comma-separated thresholds")->delimiter(',');
    if (name == "lemma-b27")
      cmd->add_option("--constant", o.constant, "statement or proof")->check(CLI::IsMember({"statement", "proof"}));
    verify_cmds[name] = cmd;
  }

  auto* pipeline = app.add_subcommand("pipeline", "simulate, construct, bound and verify from a config file");
  pipeline->add_option("--config", o.config, "experiment config JSON")->required();
  pipeline->add_option("--R", o.R_override, "override replications");
  pipeline->add_option("--seed", o.seed_override, "override seed");
  pipeline->add_option("--out-dir", o.out_dir, "override output directory");
  pipeline->add_option("--nets", o.nets, "override net mode")->check(CLI::IsMember({"exact", "greedy", "auto"}));
  pipeline->add_option("--checks", o.checks, "override checks (comma-separated)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (cover->parsed()) {
      const auto space = io::read_space(o.input);
      emit(io::cover_to_json(covering_number(space, o.eta, pick_mode(o.exact, o.greedy), o.exact_limit)), o.out);
    } else if (chain->parsed()) {
      const auto space = io::read_space(o.input);
      const auto mode = pick_mode(o.exact, o.greedy);
      const auto family = build_chaining_family(space, mode);
      auto doc = io::family_to_json(family);
      doc["validation"] = io::property_report_to_json(validate_family(space, family, family.mode() == NetMode::Exact));
      emit(doc, o.out);
    } else if (pairs->parsed()) {
      const auto space = io::read_space(o.input);
      const auto red = build_pair_set(space, o.A, o.r, o.c);
      auto doc = io::pairs_to_json(red);
      doc["validation"] = io::property_report_to_json(validate_reduction(space, red));
      emit(doc, o.out);
    } else if (bound_lemma->parsed()) {
      const auto space = io::read_space(o.input);
      const auto params = io::bound_params_from_json(io::read_json(o.params));
      const auto mode = pick_mode(o.exact, o.greedy);
      const auto constant = lemma_constant_from_string(o.constant);
      json doc = {{"delta", o.delta},
                  {"params", io::bound_params_to_json(params)},
                  {"constant", o.constant},
                  {"bound", lemma_b27_bound(space, o.delta, params, mode, constant)}};
      if (const auto lv = lemma_b27_levels(space, o.delta, mode))
        doc["levels"] = {{"n0", lv->n0}, {"n1", lv->n1}, {"n2", lv->n2}, {"n3", lv->n3}, {"r_bar", lv->r_bar}, {"N4", lv->n4}};
      emit(doc, o.out);
    } else if (bound_holder->parsed()) {
      const auto params = io::bound_params_from_json(io::read_json(o.params));
      params.validate();
      const auto L = holder_constant(params, o.tol);
      emit({{"params", io::bound_params_to_json(params)}, {"L", L.L}, {"L1", L.L1}, {"L2", L.L2}, {"k0", L.k0},
            {"terms_used", L.terms_used}, {"tail_bound", L.tail_bound}},
           o.out);
    } else if (simulate->parsed()) {
      if (o.R < 1) throw Error(ErrorKind::InputError, kModule, "R must be positive");
      const auto space = io::read_space(o.input);
      const ProcessSpec spec{process_kind_from_string(o.kind), o.H};
      if (o.summands > 0) {
        const std::vector<std::size_t> ns{o.summands};
        io::write_ensemble(o.out, simulate_partial_sums(space, spec, ns, o.R, o.seed).at(o.summands));
      } else {
        io::write_ensemble(o.out, simulate_process(space, spec, o.R, o.seed));
      }
    } else if (verify->parsed()) {
      const auto space = io::read_space(o.input);
      json doc = {{"space", o.input}, {"paths", o.paths}, {"deltas", o.deltas}};
      bool pass = true;
      if (verify_cmds["tightness"]->parsed() || verify_cmds["clt"]->parsed()) {
        std::map<std::size_t, PathEnsemble> sums;
        for (const auto& p : o.paths) {
          auto ens = load_paths(p, space);
          const std::size_t n = std::max<std::size_t>(ens.summands, 1);
          sums.emplace(n, std::move(ens));
        }
        if (verify_cmds["tightness"]->parsed()) {
          const auto table = tightness_table(space, sums, o.deltas, o.epsilons);
          json entries = json::array();
          for (const auto& e : table.entries)
            entries.push_back({{"n", e.n}, {"delta", e.delta}, {"epsilon", e.epsilon}, {"probability", e.probability},
                               {"ci", {e.ci.lo, e.ci.hi}}, {"hits", e.hits}, {"R", e.R}});
          json monotone = json::array();
          for (double eps : o.epsilons) {
            const auto m = check_tightness_monotone(table, o.deltas, eps);
            pass = pass && m.pass;
            monotone.push_back({{"epsilon", eps}, {"pass", m.pass}});
          }
          doc["epsilons"] = o.epsilons;
          doc["entries"] = entries;
          doc["monotone"] = monotone;
        } else {
          const auto params = io::bound_params_from_json(io::read_json(o.params));
          doc["params"] = io::bound_params_to_json(params);
          const MomentCertificate cert{params.M, params.p, params.q,
                                       sums.begin()->second.process.kind == ProcessKind::FBM};
          const auto chain_result = verify_clt_moment_chain(space, sums, cert);
          doc["reports"] = reports_json(chain_result.reports);
          std::size_t misses = 0;
          for (const auto& c : chain_result.identity) misses += c.pass ? 0 : 1;
          doc["identity"] = {{"checks", chain_result.identity.size()}, {"failures", misses}};
          pass = chain_result.all_pass();
        }
      } else {
        if (o.paths.size() != 1) throw Error(ErrorKind::InputError, kModule, "expected exactly one --paths file");
        const auto ens = load_paths(o.paths.front(), space);
        const auto params = io::bound_params_from_json(io::read_json(o.params));
        doc["params"] = io::bound_params_to_json(params);
        const MomentCertificate cert{params.M, params.p, params.q, false};
        const EntropyParams entropy{params.C, params.t, space.diameter()};
        std::vector<VerificationReport> reports;
        if (verify_cmds["corollary"]->parsed()) {
          reports = verify_corollary(space, ens, cert, entropy, params.beta, o.deltas);
        } else {
          LemmaCheckOptions opts;
          opts.constant = lemma_constant_from_string(o.constant);
          doc["constant"] = o.constant;
          for (double d : o.deltas) {
            auto r = verify_lemma_b27(space, ens, cert, entropy, d, opts);
            if (r.details.count("decomposition_violations") && r.details.at("decomposition_violations") != 0.0) r.pass = false;
            reports.push_back(std::move(r));
          }
        }
        for (const auto& r : reports) pass = pass && r.pass;
        doc["reports"] = reports_json(reports);
      }
      doc["pass"] = pass;
      emit(doc, o.out);
      return pass ? kExitPass : kExitVerificationFailure;
    } else if (pipeline->parsed()) {
      const std::filesystem::path cfg_path = o.config;
      if (!std::filesystem::exists(cfg_path))
        throw Error(ErrorKind::InputError, kModule, "config not found: " + o.config);
      auto config = config_from_json(io::read_json(cfg_path), cfg_path.parent_path());
      if (o.R_override) config.R = *o.R_override;
      if (o.seed_override) config.seed = *o.seed_override;
      if (!o.out_dir.empty()) config.out_dir = o.out_dir;
      if (!o.nets.empty()) config.nets = net_mode_from_string(o.nets);
      if (!o.checks.empty()) config.checks = o.checks;
      const auto result = run_pipeline(config);
      if (result.report.contains("error"))
        std::cerr << "error: " << result.report["error"]["message"].get<std::string>() << '\n';
      std::cout << "report: " << (config.out_dir / "report.json").string() << "  pass: "
                << (result.exit_code == kExitPass ? "yes" : "no") << '\n';
      return result.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitPass;
}
