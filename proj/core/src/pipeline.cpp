#include "chainkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "chainkit/chaining.hpp"
#include "chainkit/error.hpp"
#include "chainkit/io.hpp"
#include "chainkit/simulate.hpp"
#include "chainkit/verify.hpp"

namespace chainkit {
namespace {

using nlohmann::json;
constexpr const char* kModule = "cli";

const std::set<std::string> kKnownChecks = {"corollary", "lemma-b27", "holder", "certificate", "tightness", "clt"};
const std::set<std::string> kKnownKeys = {"space", "process", "p", "R", "seed", "entropy", "betas", "deltas",
                                          "checks", "n_values", "epsilons", "tol", "nets", "lemma_constant",
                                          "out_dir"};

template <class T>
std::vector<T> list_of(const json& doc, const char* key) {
  if (!doc.is_array()) throw Error(ErrorKind::InputError, kModule, std::string(key) + " must be an array");
  try {
    return doc.get<std::vector<T>>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::InputError, kModule, std::string(key) + " has entries of the wrong type");
  }
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

bool wants(const ExperimentConfig& c, const char* check) {
  return std::find(c.checks.begin(), c.checks.end(), check) != c.checks.end();
}

struct Collector {
  json reports = json::array();
  std::ostringstream csv;
  bool all_pass = true;

  Collector() { csv << "statistic,delta,estimate,std_error,bound,margin,pass\n"; }

  void add(const VerificationReport& r, bool extra_condition = true) {
    const bool pass = r.pass && extra_condition;
    all_pass = all_pass && pass;
    auto doc = io::report_to_json(r);
    doc["pass"] = pass;
    reports.push_back(std::move(doc));
    csv << r.statistic << ',' << fmt(r.delta) << ',' << fmt(r.estimate.mean) << ',' << fmt(r.estimate.std_error)
        << ',' << fmt(r.bound) << ',' << fmt(r.margin) << ',' << (pass ? "true" : "false") << '\n';
  }

  void add_row(const std::string& statistic, double delta, double estimate, double se, bool pass) {
    all_pass = all_pass && pass;
    csv << statistic << ',' << fmt(delta) << ',' << fmt(estimate) << ',' << fmt(se) << ",,," << (pass ? "true" : "false")
        << '\n';
  }
};

EntropyParams entropy_for(const FiniteMetricSpace& space, const ExperimentConfig& config) {
  const auto grid = config.entropy_etas.empty() ? dyadic_eta_grid(space) : config.entropy_etas;
  return fit_entropy_params(space, grid, config.entropy_t, config.nets);
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return is_numeric(err->kind()) ? kExitNumericError : kExitInputError;
  return kExitInputError;
}

NetMode net_mode_from_string(const std::string& name) {
  if (name == "exact") return NetMode::Exact;
  if (name == "greedy") return NetMode::Greedy;
  if (name == "auto") return NetMode::Auto;
  throw Error(ErrorKind::InputError, kModule, "unknown net mode '" + name + "'");
}

std::string to_string(NetMode mode) {
  switch (mode) {
    case NetMode::Exact: return "exact";
    case NetMode::Greedy: return "greedy";
    case NetMode::Auto: return "auto";
  }
  return "auto";
}

LemmaConstant lemma_constant_from_string(const std::string& name) {
  if (name == "statement") return LemmaConstant::Statement;
  if (name == "proof") return LemmaConstant::Proof;
  throw Error(ErrorKind::InputError, kModule, "unknown lemma constant '" + name + "'");
}

std::string to_string(LemmaConstant constant) {
  return constant == LemmaConstant::Statement ? "statement" : "proof";
}

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorKind::InputError, kModule, "config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.count(key)) throw Error(ErrorKind::InputError, kModule, "unknown config key '" + key + "'");

  ExperimentConfig c;
  try {
    if (doc.contains("space")) {
      const auto& s = doc.at("space");
      if (s.contains("file")) {
        std::filesystem::path f = s.at("file").get<std::string>();
        c.space.file = f.is_relative() && !base_dir.empty() ? base_dir / f : f;
      }
      if (s.contains("grid")) {
        const auto& g = s.at("grid");
        c.space.grid_points = g.value("points", c.space.grid_points);
        c.space.lo = g.value("lo", c.space.lo);
        c.space.hi = g.value("hi", c.space.hi);
      }
    }
    if (doc.contains("process")) {
      const auto& p = doc.at("process");
      if (p.contains("kind")) c.process.kind = process_kind_from_string(p.at("kind").get<std::string>());
      c.process.H = p.value("H", c.process.H);
    }
    c.p = doc.value("p", c.p);
    if (doc.contains("R")) c.R = static_cast<std::size_t>(doc.at("R").get<double>());
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("entropy")) {
      const auto& e = doc.at("entropy");
      if (e.contains("t") && !e.at("t").is_null()) c.entropy_t = e.at("t").get<double>();
      if (e.contains("etas")) c.entropy_etas = list_of<double>(e.at("etas"), "entropy.etas");
    }
    if (doc.contains("betas")) c.betas = list_of<double>(doc.at("betas"), "betas");
    if (doc.contains("deltas")) c.deltas = list_of<double>(doc.at("deltas"), "deltas");
    if (doc.contains("checks")) c.checks = list_of<std::string>(doc.at("checks"), "checks");
    if (doc.contains("n_values")) c.n_values = list_of<std::size_t>(doc.at("n_values"), "n_values");
    if (doc.contains("epsilons")) c.epsilons = list_of<double>(doc.at("epsilons"), "epsilons");
    c.tol = doc.value("tol", c.tol);
    if (doc.contains("nets")) c.nets = net_mode_from_string(doc.at("nets").get<std::string>());
    if (doc.contains("lemma_constant"))
      c.lemma_constant = lemma_constant_from_string(doc.at("lemma_constant").get<std::string>());
    if (doc.contains("out_dir")) {
      std::filesystem::path o = doc.at("out_dir").get<std::string>();
      c.out_dir = o;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, kModule, std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json space;
  if (c.space.file) space["file"] = c.space.file->string();
  else space["grid"] = {{"points", c.space.grid_points}, {"lo", c.space.lo}, {"hi", c.space.hi}};
  json entropy = {{"t", c.entropy_t ? json(*c.entropy_t) : json(nullptr)}, {"etas", c.entropy_etas}};
  return {{"space", space},
          {"process", {{"kind", to_string(c.process.kind)}, {"H", c.process.H}}},
          {"p", c.p},
          {"R", c.R},
          {"seed", c.seed},
          {"entropy", entropy},
          {"betas", c.betas},
          {"deltas", c.deltas},
          {"checks", c.checks},
          {"n_values", c.n_values},
          {"epsilons", c.epsilons},
          {"tol", c.tol},
          {"nets", to_string(c.nets)},
          {"lemma_constant", to_string(c.lemma_constant)},
          {"out_dir", c.out_dir.string()}};
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InputError, kModule, msg); };
  if (c.R < kMinReplications) fail("R must be at least " + std::to_string(kMinReplications));
  if (c.checks.empty()) fail("no checks requested");
  for (const auto& check : c.checks)
    if (!kKnownChecks.count(check)) fail("unknown check '" + check + "'");
  if (c.space.file && !std::filesystem::exists(*c.space.file))
    fail("space file not found: " + c.space.file->string());
  if (!c.space.file && c.space.grid_points < 2) fail("grid needs at least two points");
  const bool needs_deltas = wants(c, "corollary") || wants(c, "lemma-b27") || wants(c, "tightness");
  if (needs_deltas && c.deltas.empty()) fail("delta grid is empty");
  if ((wants(c, "corollary") || wants(c, "holder")) && c.betas.empty()) fail("beta grid is empty");
  if ((wants(c, "tightness") || wants(c, "clt")) && c.n_values.empty()) fail("n grid is empty");
  if (wants(c, "tightness") && c.epsilons.empty()) fail("epsilon grid is empty");
  if (std::any_of(c.n_values.begin(), c.n_values.end(), [](std::size_t n) { return n == 0; }))
    fail("n values must be positive");
}

FiniteMetricSpace load_space(const SpaceSource& source) {
  if (source.file) return io::read_space(*source.file);
  return uniform_grid(source.grid_points, source.lo, source.hi);
}

PipelineResult run_pipeline(const ExperimentConfig& config, bool write_outputs) {
  PipelineResult result;
  json& report = result.report;
  report["tool"] = "chainkit";
  report["timestamp"] = timestamp_utc();
  report["config"] = config_to_json(config);
  report["note"] =
      "suprema are taken over the finite parameter set; they are lower bounds of the suprema over any "
      "countable superset, so a pass is necessary but weaker evidence";
  Collector out;

  try {
    validate_config(config);
    const auto space = load_space(config.space);
    report["space"] = {{"n", space.size()},
                       {"diameter", space.diameter()},
                       {"min_gap", space.size() > 1 ? json(space.min_gap()) : json(nullptr)},
                       {"fingerprint", io::hex_id(space.fingerprint())}};

    // simulate
    const bool needs_plain = wants(config, "corollary") || wants(config, "lemma-b27") ||
                             wants(config, "holder") || wants(config, "certificate");
    const bool needs_sums = wants(config, "tightness") || wants(config, "clt");
    std::optional<PathEnsemble> plain;
    std::map<std::size_t, PathEnsemble> sums;
    if (needs_plain) plain = simulate_process(space, config.process, config.R, config.seed);
    if (needs_sums) sums = simulate_partial_sums(space, config.process, config.n_values, config.R, config.seed);
    const auto cert = certificate_for(config.process, config.p);
    report["certificate"] = {{"M", cert.M}, {"p", cert.p}, {"q", cert.q}, {"exact", cert.exact}};

    // construct
    const auto family = build_chaining_family(space, config.nets);
    const bool exact_nets = family.mode() == NetMode::Exact;
    const auto structure = validate_family(space, family, exact_nets);
    json cards = json::object();
    for (const auto& [level, count] : family.net_cardinalities()) cards[std::to_string(level)] = count;
    report["family"] = {{"n0", family.n0()}, {"n1", family.n1()}, {"nets", to_string(family.mode())},
                        {"cardinalities", cards}, {"validation", io::property_report_to_json(structure)}};
    out.add_row("family_structure", 0.0, structure.all_pass() ? 1.0 : 0.0, 0.0, structure.all_pass());

    const auto entropy = entropy_for(space, config);
    const auto grid = config.entropy_etas.empty() ? dyadic_eta_grid(space) : config.entropy_etas;
    const auto echeck = check_entropy(space, entropy, grid, config.nets);
    report["entropy"] = {{"C", entropy.C}, {"t", entropy.t}, {"eta_max", entropy.eta_max},
                         {"holds", echeck.holds}, {"worst_ratio", echeck.worst_ratio}};
    out.add_row("entropy_condition", 0.0, echeck.worst_ratio, 0.0, echeck.holds);

    // bound
    json bounds = json::array();
    for (double beta : config.betas) {
      if (!(wants(config, "corollary") || wants(config, "holder"))) break;
      const auto params = bound_params(cert, entropy, beta, space.diameter());
      const auto L = holder_constant(params, config.tol);
      bounds.push_back({{"beta", beta}, {"params", io::bound_params_to_json(params)}, {"L", L.L}, {"L1", L.L1},
                        {"L2", L.L2}, {"k0", L.k0}, {"terms_used", L.terms_used}, {"tail_bound", L.tail_bound}});
    }
    report["bounds"] = bounds;

    // verify
    if (wants(config, "certificate")) {
      const auto checks = check_certificate(space, *plain, cert);
      const auto failures = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; });
      report["certificate_check"] = {{"pairs", checks.size()}, {"failures", failures}};
      out.add_row("certificate", 0.0, static_cast<double>(failures), 0.0, failures == 0);
    }
    for (double beta : config.betas) {
      if (wants(config, "corollary"))
        for (const auto& r : verify_corollary(space, *plain, cert, entropy, beta, config.deltas, config.tol)) out.add(r);
      if (wants(config, "holder")) out.add(verify_holder(space, *plain, cert, entropy, beta, config.tol));
    }
    if (wants(config, "lemma-b27")) {
      LemmaCheckOptions opts;
      opts.mode = config.nets;
      opts.constant = config.lemma_constant;
      for (double delta : config.deltas) {
        const auto r = verify_lemma_b27(space, *plain, cert, entropy, delta, opts);
        const auto it = r.details.find("decomposition_violations");
        out.add(r, it == r.details.end() || it->second == 0.0);
      }
    }
    if (wants(config, "tightness")) {
      const auto table = tightness_table(space, sums, config.deltas, config.epsilons);
      json entries = json::array();
      for (const auto& e : table.entries)
        entries.push_back({{"n", e.n}, {"delta", e.delta}, {"epsilon", e.epsilon}, {"hits", e.hits}, {"R", e.R},
                           {"probability", e.probability}, {"ci", {e.ci.lo, e.ci.hi}}});
      json monotone = json::array();
      for (double eps : config.epsilons) {
        const auto m = check_tightness_monotone(table, config.deltas, eps);
        monotone.push_back({{"epsilon", eps}, {"pass", m.pass}});
        for (double delta : config.deltas) {
          const auto& e = table.max_over_n(delta, eps);
          out.add_row("tightness_max_over_n", delta, e.probability,
                      std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(e.R)), m.pass);
        }
      }
      report["tightness"] = {{"entries", entries}, {"monotone", monotone}};
    }
    if (wants(config, "clt")) {
      const auto chain = verify_clt_moment_chain(space, sums, certificate_for(config.process, 2.0));
      for (const auto& r : chain.reports) out.add(r);
      const auto misses = std::count_if(chain.identity.begin(), chain.identity.end(), [](const auto& c) { return !c.pass; });
      report["clt_identity"] = {{"checks", chain.identity.size()}, {"failures", misses}};
      if (!chain.identity.empty())
        out.add_row("clt_identity", 0.0, static_cast<double>(misses), 0.0, misses == 0);
    }
    report["reports"] = out.reports;
    report["pass"] = out.all_pass;
    result.exit_code = out.all_pass ? kExitPass : kExitVerificationFailure;
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    json err = {{"message", e.what()}};
    if (const auto* ce = dynamic_cast<const Error*>(&e)) {
      err["kind"] = std::string(to_string(ce->kind()));
      err["module"] = ce->module();
    }
    report["error"] = err;
    report["reports"] = out.reports;
    report["pass"] = false;
  }
  report["exit_code"] = result.exit_code;
  result.summary_csv = out.csv.str();

  if (write_outputs) {
    io::write_json(config.out_dir / "report.json", report);
    io::write_text(config.out_dir / "summary.csv", result.summary_csv);
  }
  return result;
}

}  // namespace chainkit
