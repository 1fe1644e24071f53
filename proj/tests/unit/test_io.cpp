#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "chainkit/error.hpp"
#include "chainkit/io.hpp"
#include "chainkit/simulate.hpp"
#include "support/random_spaces.hpp"

using namespace chainkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "chainkit_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, SpaceJsonRoundTrip) {
  const auto s = uniform_grid(5);
  const auto back = io::space_from_json(io::space_to_json(s));
  EXPECT_EQ(back.fingerprint(), s.fingerprint());
  EXPECT_EQ(back.labels(), s.labels());
}

TEST(Io, DistOnlyAndConsistencyCheck) {
  const auto doc = io::json::parse(R"({"labels": ["a","b"], "dist": [[0, 2], [2, 0]]})");
  const auto s = io::space_from_json(doc);
  EXPECT_EQ(s.distance(0, 1), 2.0);
  const auto both = io::json::parse(R"({"coords": [[0], [2]], "dist": [[0, 2], [2, 0]]})");
  EXPECT_NO_THROW((void)io::space_from_json(both));
  const auto clash = io::json::parse(R"({"coords": [[0], [2]], "dist": [[0, 2.1], [2.1, 0]]})");
  EXPECT_THROW((void)io::space_from_json(clash), Error);
  EXPECT_THROW((void)io::space_from_json(io::json::parse(R"({"labels": ["a"]})")), Error);
}

TEST(Io, CsvWithAndWithoutHeader) {
  const auto a = io::space_from_csv("x,y\n0,0\n3,4\n");
  EXPECT_DOUBLE_EQ(a.distance(0, 1), 5.0);
  const auto b = io::space_from_csv("0.0\n0.5\n1.0\n");
  EXPECT_EQ(b.size(), 3u);
  EXPECT_THROW((void)io::space_from_csv("1,2\n3\n"), Error);
}

TEST(Io, ReadSpaceMissingFile) {
  try {
    (void)io::read_space("/nonexistent/space.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InputError);
  }
}

TEST(Io, EnsembleRoundTripIsExact) {
  const auto s = uniform_grid(7);
  const auto e = simulate_process(s, {ProcessKind::FBM, 0.5}, 50, 4);
  const auto path = scratch("paths.bin");
  io::write_ensemble(path, e);
  const auto back = io::read_ensemble(path);
  EXPECT_EQ(back.values, e.values);
  EXPECT_EQ(back.R, e.R);
  EXPECT_EQ(back.n, e.n);
  EXPECT_EQ(back.seed, e.seed);
  EXPECT_EQ(back.space_id, e.space_id);
  EXPECT_EQ(back.process.kind, e.process.kind);

  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  const auto h = io::json::parse(header);
  EXPECT_EQ(h.at("R"), 50);
  EXPECT_EQ(h.at("meta").at("kind"), "fbm");
  EXPECT_EQ(fs::file_size(path), header.size() + 1 + 50 * 7 * 8);
}

TEST(Io, TruncatedEnsembleRejected) {
  const auto path = scratch("short.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << R"({"R":2,"n":2,"d":1,"seed":0,"meta":{"kind":"fbm"}})" << '\n' << "abc";
  }
  EXPECT_THROW((void)io::read_ensemble(path), Error);
}

TEST(Io, ParamsAndReports) {
  const auto p = io::bound_params_from_json(io::json::parse(R"({"M":3,"p":4,"q":2,"C":1,"t":1,"beta":0.1,"diam":1})"));
  EXPECT_EQ(p.M, 3.0);
  EXPECT_EQ(io::bound_params_to_json(p).at("beta"), 0.1);
  EXPECT_THROW((void)io::bound_params_from_json(io::json::parse(R"({"M":"x"})")), Error);
  VerificationReport r;
  r.margin = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(io::report_to_json(r).at("margin").is_null());
}
