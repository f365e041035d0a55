#include <CLI11.hpp>
#include <iostream>

#include "bayesfuse/errors.hpp"
#include "bayesfuse/runner.hpp"
#include "bayesfuse/version.hpp"

namespace {

using bayesfuse::RunManifest;

// Shared flags; each subcommand picks up the subset it documents.
void add_common_options(CLI::App* cmd, RunManifest& manifest, std::vector<double>& crange,
                        std::vector<double>& hrange, std::vector<double>& urange) {
  cmd->add_option("--scenario", manifest.scenario_ref,
                  "Scenario file path or builtin:<name>[:k=v,...]");
  cmd->add_option("--seed", manifest.seed, "Master seed (default 1)");
  cmd->add_option("--samples,-L", manifest.samples, "Monte Carlo sample count");
  cmd->add_option("--proposal", manifest.proposal, "Proposal for H': prior|uniform");
  cmd->add_option("--confidence", manifest.confidence, "Two-sided confidence level R in (0,1)");
  cmd->add_option("--bins", manifest.decision_bins, "Decision bins over a continuous K");
  cmd->add_option("--object-bins", manifest.object_bins, "Object bins over a continuous I");
  cmd->add_option("--crange", crange, "Decision grid range: lo hi")->expected(2);
  cmd->add_option("--hrange", hrange, "Object grid range: lo hi")->expected(2);
  cmd->add_option("--uniform-range", urange,
                  "Bounded range for the uniform proposal on an unbounded I: lo hi")
      ->expected(2);
  cmd->add_option("--topology", manifest.topology_spec,
                  "centralized | pbpo:groups=0,1|2:kstar=points[0;1] (overrides the file)");
  cmd->add_option("--threads", manifest.threads, "Worker threads (default 1)");
  cmd->add_option("--out", manifest.out_dir, "Output directory (default ./out)");
}

void apply_ranges(RunManifest& manifest, const std::vector<double>& crange,
                  const std::vector<double>& hrange, const std::vector<double>& urange) {
  if (crange.size() == 2) manifest.decision_range = bayesfuse::Interval{crange[0], crange[1]};
  if (hrange.size() == 2) manifest.object_range = bayesfuse::Interval{hrange[0], hrange[1]};
  if (urange.size() == 2) manifest.uniform_range = bayesfuse::Interval{urange[0], urange[1]};
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, double> params;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw bayesfuse::InputError("--param expects key=value, got '" + kv + "'");
    }
    params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes-optimal deterministic data fusion engine"};
  app.set_version_flag("--version", bayesfuse::kEngineVersion);
  app.require_subcommand(1);

  RunManifest manifest;
  std::vector<double> crange, hrange, urange;
  std::vector<std::string> params;
  std::string positional_name;

  CLI::App* fuse = app.add_subcommand("fuse", "Fuse a CSV of feature rows into decisions");
  add_common_options(fuse, manifest, crange, hrange, urange);
  fuse->add_option("--features", manifest.features_path, "Input CSV of feature rows")->required();
  fuse->add_flag("--soft", manifest.soft, "Also emit the pre-quantization posterior mean");

  CLI::App* performance =
      app.add_subcommand("performance", "Estimate the decision-given-object density grid");
  add_common_options(performance, manifest, crange, hrange, urange);
  performance->add_flag("--literal-weights", manifest.literal_weighting,
                        "Weight samples by their joint feature density (comparison only)");

  CLI::App* risk = app.add_subcommand("risk", "Estimate the Bayes risk with a confidence interval");
  add_common_options(risk, manifest, crange, hrange, urange);
  risk->add_option("--cost", manifest.cost_spec,
                   "Cost override: quadratic|squared-error|power:p|poly:2=c2,4=c4|zero");
  risk->add_option("--bound", manifest.bound_method, "Interval method: clt|conservative");

  CLI::App* analytic = app.add_subcommand("analytic", "Closed-form rules, risks and grids");
  add_common_options(analytic, manifest, crange, hrange, urange);
  analytic->add_option("name", positional_name,
                       "gauss | expo | pbpo-gauss | poisson-binary")->required();
  analytic->add_option("--param", params, "Oracle parameter key=value (repeatable)");
  analytic->add_flag("--grid", manifest.analytic_grid, "Also write the closed-form grid CSV");

  CLI::App* validate =
      app.add_subcommand("validate", "Cross-validate the engine against the closed-form oracles");
  add_common_options(validate, manifest, crange, hrange, urange);
  validate->add_option("name", positional_name,
                       "gauss | expo | fourclass-hard | fourclass-soft | fourclass-pbpo | "
                       "poisson-binary | mixture")
      ->required();
  validate->add_option("--param", params, "Scenario parameter key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bayesfuse::kExitUsage;
  }

  try {
    manifest.params = parse_params(params);
    apply_ranges(manifest, crange, hrange, urange);
    if (fuse->parsed()) manifest.subcommand = "fuse";
    if (performance->parsed()) manifest.subcommand = "performance";
    if (risk->parsed()) manifest.subcommand = "risk";
    if (analytic->parsed()) {
      manifest.subcommand = "analytic";
      manifest.scenario_ref = positional_name;
    }
    if (validate->parsed()) {
      manifest.subcommand = "validate";
      manifest.scenario_ref = positional_name;
    }
    if (manifest.scenario_ref.empty()) {
      throw bayesfuse::InputError("--scenario is required");
    }
    return bayesfuse::run_manifest(manifest);
  } catch (const bayesfuse::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesfuse::kExitDegeneracy;
  } catch (const bayesfuse::UnsupportedConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesfuse::kExitUsage;
  } catch (const bayesfuse::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesfuse::kExitUsage;
  } catch (const bayesfuse::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesfuse::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return bayesfuse::kExitUsage;
  }
}
