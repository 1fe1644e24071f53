#include "chainkit/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "chainkit/error.hpp"

namespace chainkit::io {
namespace {

constexpr const char* kModule = "io";

Eigen::MatrixXd matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty())
    throw Error(ErrorKind::InputError, kModule, std::string(what) + " must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = rows.front().is_array() ? static_cast<Eigen::Index>(rows.front().size()) : 1;
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (row.is_number()) {
      if (m != 1) throw Error(ErrorKind::InputError, kModule, std::string(what) + " rows have unequal length");
      out(i, 0) = row.get<double>();
      continue;
    }
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m)
      throw Error(ErrorKind::InputError, kModule, std::string(what) + " rows have unequal length");
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number())
        throw Error(ErrorKind::InputError, kModule, std::string(what) + " entries must be numbers");
      out(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& mat) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < mat.cols(); ++k) row.push_back(mat(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

void to_little_endian(std::uint64_t& bits) {
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
}

}  // namespace

FiniteMetricSpace space_from_json(const json& doc, Validation validation) {
  if (!doc.is_object()) throw Error(ErrorKind::InputError, kModule, "space document must be an object");
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    for (const auto& l : doc.at("labels")) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
  }
  const bool has_coords = doc.contains("coords");
  const bool has_dist = doc.contains("dist");
  if (!has_coords && !has_dist)
    throw Error(ErrorKind::InputError, kModule, "space document needs \"coords\" or \"dist\"");
  if (has_coords) {
    auto space = FiniteMetricSpace::euclidean(matrix_from_json(doc.at("coords"), "coords"), labels);
    if (has_dist) {
      const auto dist = matrix_from_json(doc.at("dist"), "dist");
      if (dist.rows() != static_cast<Eigen::Index>(space.size()) || dist.cols() != dist.rows())
        throw Error(ErrorKind::InputError, kModule, "dist and coords disagree in size");
      for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t j = 0; j < space.size(); ++j) {
          const double a = space.distance(i, j);
          const double b = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (std::abs(a - b) > kMetricTolerance * std::max({1.0, std::abs(a), std::abs(b)}))
            throw Error(ErrorKind::NotAMetric, kModule,
                        "dist differs from the coordinate distances at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
        }
    }
    return space;
  }
  const auto dist = matrix_from_json(doc.at("dist"), "dist");
  if (dist.rows() != dist.cols()) throw Error(ErrorKind::NotAMetric, kModule, "dist must be square");
  return FiniteMetricSpace::from_matrix(labels, dist, validation);
}

json space_to_json(const FiniteMetricSpace& space) {
  json doc;
  doc["labels"] = space.labels();
  if (space.coords()) doc["coords"] = matrix_to_json(*space.coords());
  else doc["dist"] = matrix_to_json(space.distances());
  return doc;
}

FiniteMetricSpace space_from_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& c : cells) {
      double v = 0.0;
      if (!parse_double(c, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(ErrorKind::InputError, kModule, "non-numeric CSV row: " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorKind::InputError, kModule, "CSV rows have unequal length");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::InputError, kModule, "CSV contains no points");
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return FiniteMetricSpace::euclidean(std::move(coords));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputError, kModule, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FiniteMetricSpace read_space(const std::filesystem::path& path, Validation validation) {
  const auto text = read_text(path);
  if (path.extension() == ".csv") return space_from_csv(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, kModule, path.string() + ": " + e.what());
  }
  return space_from_json(doc, validation);
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, kModule, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InputError, kModule, "cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json cover_to_json(const Cover& cover) {
  return {{"count", cover.count}, {"centers", cover.centers}, {"eta", cover.eta}};
}

json family_to_json(const ChainingFamily& family) {
  json nets = json::object();
  json maps = json::object();
  for (int n = family.n0(); n <= family.n1(); ++n) {
    nets[std::to_string(n)] = family.net(n);
    maps[std::to_string(n)] = family.map(n);
  }
  return {{"n0", family.n0()}, {"n1", family.n1()}, {"nets", nets}, {"maps", maps}};
}

json pairs_to_json(const PairReduction& red) {
  json trace = json::array();
  for (const auto& s : red.trace)
    trace.push_back({{"step", s.step}, {"center", s.center}, {"radius_multiple", s.radius_multiple},
                     {"removed", s.removed}});
  json pairs = json::array();
  for (const auto& [a, b] : red.pairs) pairs.push_back({a, b});
  return {{"A", red.A}, {"r", red.r}, {"c", red.c}, {"support", red.support}, {"trace", trace}, {"pairs", pairs}};
}

json property_report_to_json(const PropertyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry = {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
    if (!c.witness.empty()) entry["witness"] = c.witness;
    checks.push_back(std::move(entry));
  }
  return {{"all_pass", report.all_pass()}, {"checks", checks}};
}

BoundParams bound_params_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InputError, kModule, "params must be a JSON object");
  BoundParams b;
  auto take = [&](const char* key, double& slot) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number()) throw Error(ErrorKind::InputError, kModule, std::string("params.") + key + " must be a number");
    slot = doc.at(key).get<double>();
  };
  take("M", b.M);
  take("p", b.p);
  take("q", b.q);
  take("C", b.C);
  take("t", b.t);
  take("beta", b.beta);
  take("diam", b.diam);
  return b;
}

json bound_params_to_json(const BoundParams& b) {
  return {{"M", b.M}, {"p", b.p}, {"q", b.q}, {"C", b.C}, {"t", b.t}, {"beta", b.beta}, {"diam", b.diam}};
}

json estimate_to_json(const MCEstimate& est) {
  return {{"statistic", est.statistic}, {"mean", est.mean}, {"std_error", est.std_error}, {"R", est.R}};
}

json report_to_json(const VerificationReport& r) {
  json doc = {{"statistic", r.statistic},
              {"delta", r.delta},
              {"beta", r.beta},
              {"estimate", estimate_to_json(r.estimate)},
              {"bound", r.bound},
              {"margin", std::isfinite(r.margin) ? json(r.margin) : json(nullptr)},
              {"pass", r.pass},
              {"empty_pairs", r.empty_pairs},
              {"near_bound", r.near_bound}};
  if (!r.details.empty()) doc["details"] = r.details;
  return doc;
}

std::string hex_id(std::uint64_t id) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << id;
  return os.str();
}

void write_ensemble(const std::filesystem::path& path, const PathEnsemble& ens) {
  if (ens.values.size() != ens.R * ens.n * ens.d)
    throw Error(ErrorKind::InputError, kModule, "ensemble value count does not match R * n * d");
  json header = {{"R", ens.R},
                 {"n", ens.n},
                 {"d", ens.d},
                 {"seed", ens.seed},
                 {"meta",
                  {{"kind", to_string(ens.process.kind)},
                   {"H", ens.process.H},
                   {"summands", ens.summands},
                   {"space_id", hex_id(ens.space_id)}}}};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InputError, kModule, "cannot write " + path.string());
  out << header.dump() << '\n';
  std::vector<char> buffer(ens.values.size() * 8);
  for (std::size_t k = 0; k < ens.values.size(); ++k) {
    auto bits = std::bit_cast<std::uint64_t>(ens.values[k]);
    to_little_endian(bits);
    std::memcpy(buffer.data() + 8 * k, &bits, 8);
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw Error(ErrorKind::InputError, kModule, "short write to " + path.string());
}

PathEnsemble read_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputError, kModule, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InputError, kModule, path.string() + ": missing header");
  PathEnsemble ens;
  try {
    const auto header = json::parse(line);
    ens.R = header.at("R").get<std::size_t>();
    ens.n = header.at("n").get<std::size_t>();
    ens.d = header.at("d").get<std::size_t>();
    ens.seed = header.at("seed").get<std::uint64_t>();
    const auto& meta = header.at("meta");
    ens.process.kind = process_kind_from_string(meta.at("kind").get<std::string>());
    ens.process.H = meta.value("H", 0.5);
    ens.summands = meta.value("summands", std::size_t{0});
    ens.space_id = std::stoull(meta.value("space_id", std::string("0")), nullptr, 16);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InputError, kModule, path.string() + ": bad header: " + e.what());
  }
  const std::size_t count = ens.R * ens.n * ens.d;
  std::vector<char> buffer(count * 8);
  in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (static_cast<std::size_t>(in.gcount()) != buffer.size())
    throw Error(ErrorKind::InputError, kModule, path.string() + ": truncated value block");
  ens.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, buffer.data() + 8 * k, 8);
    to_little_endian(bits);
    ens.values[k] = std::bit_cast<double>(bits);
  }
  return ens;
}

}  // namespace chainkit::io
