#pragma once

#include <nlohmann/json.hpp>

#include "bayesfuse/builtin.hpp"
#include "bayesfuse/montecarlo.hpp"
#include "bayesfuse/version.hpp"

namespace bayesfuse {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegeneracy = 3;

/// Every input of a run; fully determines every output byte.  Serialized to
/// manifest.json alongside the outputs so any run can be reproduced.
struct RunManifest {
  std::string subcommand;
  std::string scenario_ref;                  // path or "builtin:name:k=v,..."
  std::map<std::string, double> params;      // analytic/validate parameters
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  std::string proposal = "prior";            // prior | uniform
  double confidence = 0.95;
  int decision_bins = 200;
  int object_bins = 64;
  std::optional<Interval> decision_range;
  std::optional<Interval> object_range;
  std::optional<Interval> uniform_range;
  bool literal_weighting = false;
  std::string topology_spec;                 // "" = use the scenario file's topology
  std::string cost_spec;                     // "" = use the scenario's cost
  std::string bound_method = "clt";          // clt | conservative
  std::string features_path;                 // fuse input CSV
  bool soft = false;                         // fuse: also emit posterior means
  bool analytic_grid = false;                // analytic: also emit the closed-form grid
  int threads = 1;
  std::string out_dir = "out";
  std::string engine_version = kEngineVersion;

  nlohmann::ordered_json to_json() const;
};

/// Execute one subcommand; writes outputs plus manifest.json into out_dir and
/// returns the process exit code (0 ok, 1 validation failure).  Input and
/// configuration problems are thrown (InputError / UnsupportedConfigError /
/// DegeneracyError / IoError) for the caller to map onto exit codes.
int run_manifest(const RunManifest& manifest);

int run_fuse(const RunManifest& manifest);
int run_performance(const RunManifest& manifest);
int run_risk(const RunManifest& manifest);
int run_analytic(const RunManifest& manifest);
int run_validate(const RunManifest& manifest);

/// Shortest round-trip decimal formatting used for all CSV output.
std::string format_double(double value);

/// Builds the rule for a loaded scenario, honoring an inline topology
/// override ("" keeps the file's topology or centralized).
std::shared_ptr<const Rule> make_rule(const LoadedScenario& loaded, const std::string& topology_spec);

/// Writes the grid in the interchange layout: header row of decision-bin
/// centers, first column of object-bin centers, one row per object bin.
void write_grid_csv(const std::string& path, const mc::PerformanceGrid& grid);

}  // namespace bayesfuse
