#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chainkit/bounds.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/ensemble.hpp"
#include "chainkit/metric_space.hpp"

namespace chainkit {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericError = 3;

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e) noexcept;

struct SpaceSource {
  std::optional<std::filesystem::path> file;  ///< JSON or CSV; otherwise a uniform grid
  std::size_t grid_points = 33;
  double lo = 0.0;
  double hi = 1.0;
};

struct ExperimentConfig {
  SpaceSource space;
  ProcessSpec process;
  double p = 4.0;
  std::size_t R = 100000;
  std::uint64_t seed = 42;
  std::optional<double> entropy_t;   ///< fixed entropy exponent; fitted when absent
  std::vector<double> entropy_etas;  ///< empty: dyadic grid of the space
  std::vector<double> betas = {0.1};
  std::vector<double> deltas = {0.5, 0.25, 0.125};
  /// Any of corollary, lemma-b27, holder, certificate, tightness, clt.
  std::vector<std::string> checks = {"corollary"};
  std::vector<std::size_t> n_values = {1, 4, 16, 64};
  std::vector<double> epsilons = {0.5};
  double tol = 1e-12;
  NetMode nets = NetMode::Auto;
  LemmaConstant lemma_constant = LemmaConstant::Statement;
  std::filesystem::path out_dir = "out";
};

inline constexpr std::size_t kMinReplications = 100;

/// Reads a config document; relative file paths resolve against `base_dir`.
/// Unknown keys are rejected with InputError.
ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Throws InputError for empty grids, R < 100, unknown checks or a missing space file.
void validate_config(const ExperimentConfig& config);

FiniteMetricSpace load_space(const SpaceSource& source);

NetMode net_mode_from_string(const std::string& name);
std::string to_string(NetMode mode);
LemmaConstant lemma_constant_from_string(const std::string& name);
std::string to_string(LemmaConstant constant);

struct PipelineResult {
  int exit_code = kExitPass;
  nlohmann::json report;  ///< full report, including the effective config
  std::string summary_csv;
};

/// simulate -> construct -> bound -> verify. Errors are caught and mapped to
/// exit codes 2 (input) and 3 (numeric); failed checks give exit code 1.
/// With `write_outputs`, report.json and summary.csv go to config.out_dir.
PipelineResult run_pipeline(const ExperimentConfig& config, bool write_outputs = true);

}  // namespace chainkit
