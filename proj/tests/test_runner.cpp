#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bayesfuse/errors.hpp"
#include "bayesfuse/runner.hpp"

using namespace bayesfuse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bayesfuse-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("risk and performance runs reproduce byte-identically from their manifest") {
  TempDir tmp;
  RunManifest manifest;
  manifest.subcommand = "risk";
  manifest.scenario_ref = "builtin:gauss:u=1,v=1,M=2";
  manifest.seed = 4242;
  manifest.samples = 50000;
  manifest.out_dir = (tmp.path / "a").string();
  REQUIRE(run_manifest(manifest) == 0);
  const std::string first = slurp(tmp.path / "a" / "risk.json");

  fs::remove_all(tmp.path / "a");
  REQUIRE(run_manifest(manifest) == 0);
  CHECK(slurp(tmp.path / "a" / "risk.json") == first);

  RunManifest perf = manifest;
  perf.subcommand = "performance";
  perf.decision_range = Interval{-3.0, 3.0};
  perf.object_range = Interval{-3.0, 3.0};
  perf.out_dir = (tmp.path / "b").string();
  REQUIRE(run_manifest(perf) == 0);
  const std::string csv1 = slurp(tmp.path / "b" / "performance.csv");
  const std::string json1 = slurp(tmp.path / "b" / "performance.json");
  fs::remove_all(tmp.path / "b");
  REQUIRE(run_manifest(perf) == 0);
  CHECK(slurp(tmp.path / "b" / "performance.csv") == csv1);
  CHECK(slurp(tmp.path / "b" / "performance.json") == json1);
}

TEST_CASE("performance CSV rows normalize against their bin width") {
  TempDir tmp;
  RunManifest manifest;
  manifest.subcommand = "performance";
  manifest.scenario_ref = "builtin:fourclass-soft";
  manifest.seed = 7;
  manifest.samples = 100000;
  manifest.out_dir = tmp.path.string();
  REQUIRE(run_manifest(manifest) == 0);

  std::ifstream in(tmp.path / "performance.csv");
  std::string header;
  std::getline(in, header);
  REQUIRE(header.rfind("h,", 0) == 0);
  // 200 decision bins over [0, 3].
  const double width = 3.0 / 200.0;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // row label: object point
    double total = 0.0;
    while (std::getline(ss, cell, ',')) total += std::stod(cell);
    CHECK(std::abs(total * width - 1.0) <= 1e-9);
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("fuse consumes and produces CSV") {
  TempDir tmp;
  const fs::path features = tmp.path / "features.csv";
  {
    std::ofstream out(features);
    out << "a,b\n";  // header is tolerated
    out << "1,1\n0,3\n";
  }
  RunManifest manifest;
  manifest.subcommand = "fuse";
  manifest.scenario_ref = "builtin:poisson-binary";
  manifest.features_path = features.string();
  manifest.soft = true;
  manifest.out_dir = (tmp.path / "out").string();
  REQUIRE(run_manifest(manifest) == 0);
  const std::string decisions = slurp(tmp.path / "out" / "decisions.csv");
  std::stringstream ss(decisions);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "decision,posterior_mean");
  std::getline(ss, line);
  CHECK(line.rfind("1,", 0) == 0);
  std::getline(ss, line);
  CHECK(line.rfind("2,", 0) == 0);
}

TEST_CASE("validate: gauss passes at a modest sample count") {
  TempDir tmp;
  RunManifest manifest;
  manifest.subcommand = "validate";
  manifest.scenario_ref = "gauss";
  manifest.params = {{"u", 1.0}, {"v", 1.0}, {"M", 2.0}};
  manifest.samples = 200000;
  manifest.seed = 5;
  manifest.out_dir = tmp.path.string();
  CHECK(run_manifest(manifest) == 0);
  const std::string report = slurp(tmp.path / "validate.json");
  CHECK(report.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("validate: unknown names are usage errors") {
  RunManifest manifest;
  manifest.subcommand = "validate";
  manifest.scenario_ref = "does-not-exist";
  CHECK_THROWS_AS(run_manifest(manifest), InputError);
}

TEST_CASE("analytic run emits rule coefficients and risk") {
  TempDir tmp;
  RunManifest manifest;
  manifest.subcommand = "analytic";
  manifest.scenario_ref = "gauss";
  manifest.params = {{"u", 1.0}, {"v", 1.0}, {"M", 2.0}};
  manifest.analytic_grid = true;
  manifest.decision_range = Interval{-3.0, 3.0};
  manifest.object_range = Interval{-3.0, 3.0};
  manifest.out_dir = tmp.path.string();
  REQUIRE(run_manifest(manifest) == 0);
  const std::string doc = slurp(tmp.path / "analytic.json");
  CHECK(doc.find("\"coefficient\": 0.3333333333333333") != std::string::npos);
  CHECK(doc.find("\"risk\": 0.3333333333333333") != std::string::npos);
  CHECK(fs::exists(tmp.path / "analytic_performance.csv"));
}

TEST_CASE("format_double round-trips") {
  for (double x : {1.0 / 3.0, 0.0, -2.5e-300, 1e17, 0.1}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}
