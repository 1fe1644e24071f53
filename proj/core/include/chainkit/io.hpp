#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "chainkit/bounds.hpp"
#include "chainkit/chaining.hpp"
#include "chainkit/covering.hpp"
#include "chainkit/ensemble.hpp"
#include "chainkit/metric_space.hpp"
#include "chainkit/pair_reduction.hpp"
#include "chainkit/verify.hpp"

namespace chainkit::io {

using nlohmann::json;

/// {"labels": [...], "coords": [[...]...]} or {"labels", "dist"}. When both
/// coords and dist are given they must agree to 1e-12 relative.
FiniteMetricSpace space_from_json(const json& doc, Validation validation = Validation::Auto);
json space_to_json(const FiniteMetricSpace& space);

/// One point per row; a non-numeric first row is taken as a header.
FiniteMetricSpace space_from_csv(const std::string& text);

/// Dispatches on the extension (.csv, otherwise JSON). Throws InputError for
/// unreadable files.
FiniteMetricSpace read_space(const std::filesystem::path& path, Validation validation = Validation::Auto);

std::string read_text(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& doc);

json cover_to_json(const Cover& cover);
json family_to_json(const ChainingFamily& family);
json pairs_to_json(const PairReduction& reduction);
json property_report_to_json(const PropertyReport& report);

/// {"M","p","q","C","t","beta","diam"}; missing keys keep their defaults.
BoundParams bound_params_from_json(const json& doc);
json bound_params_to_json(const BoundParams& params);

json estimate_to_json(const MCEstimate& est);
/// Non-finite margins are written as null.
json report_to_json(const VerificationReport& report);

/// Header line {"R","n","d","seed","meta"} followed by R*n*d little-endian doubles.
void write_ensemble(const std::filesystem::path& path, const PathEnsemble& ens);
PathEnsemble read_ensemble(const std::filesystem::path& path);

/// Lower-case hex of a 64-bit id.
std::string hex_id(std::uint64_t id);

}  // namespace chainkit::io
