#include "bayesfuse/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bayesfuse/analytic.hpp"
#include "bayesfuse/errors.hpp"
#include "bayesfuse/network.hpp"

namespace bayesfuse {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ProposalMode parse_mode(const std::string& mode) {
  if (mode == "prior") return ProposalMode::Prior;
  if (mode == "uniform") return ProposalMode::Uniform;
  throw InputError("proposal must be 'prior' or 'uniform', got '" + mode + "'");
}

mc::BoundMethod parse_bound(const std::string& bound) {
  if (bound == "clt") return mc::BoundMethod::CltEmpirical;
  if (bound == "conservative") return mc::BoundMethod::Conservative;
  throw InputError("bound method must be 'clt' or 'conservative', got '" + bound + "'");
}

ordered_json interval_json(const std::optional<Interval>& iv) {
  if (!iv) return nullptr;
  return ordered_json::array({iv->lo, iv->hi});
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_json(const std::string& path, const ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

void write_manifest(const RunManifest& manifest) {
  write_json((fs::path(manifest.out_dir) / "manifest.json").string(), manifest.to_json());
}

mc::GridSpec grid_spec_of(const RunManifest& manifest) {
  mc::GridSpec spec;
  spec.decision_bins = manifest.decision_bins;
  spec.object_bins = manifest.object_bins;
  spec.decision_range = manifest.decision_range;
  spec.object_range = manifest.object_range;
  spec.literal_weighting = manifest.literal_weighting;
  return spec;
}

CostFunction cost_of(const RunManifest& manifest, const Scenario& scenario) {
  if (manifest.cost_spec.empty()) return scenario.cost();
  return parse_cost_spec(manifest.cost_spec);
}

std::vector<std::vector<double>> read_features_csv(const std::string& path, int expected_dims) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open features file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool parse_ok = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        if (cell == "inf") {
          row.push_back(std::numeric_limits<double>::infinity());
        } else if (cell == "-inf") {
          row.push_back(-std::numeric_limits<double>::infinity());
        } else {
          row.push_back(std::stod(cell, &used));
          if (used != cell.size()) parse_ok = false;
        }
      } catch (const std::exception&) {
        parse_ok = false;
        break;
      }
    }
    if (!parse_ok) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw InputError(path + ":" + std::to_string(line_no) + ": cannot parse feature row");
    }
    first = false;
    if (static_cast<int>(row.size()) != expected_dims) {
      throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(expected_dims) + " features, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void append_grid_csv(std::string& out, const std::vector<double>& decision_centers,
                     const std::vector<double>& object_centers,
                     const std::function<std::string(int, int)>& cell) {
  out += "h";
  for (double c : decision_centers) {
    out += ',';
    out += format_double(c);
  }
  out += '\n';
  for (int i = 0; i < static_cast<int>(object_centers.size()); ++i) {
    out += format_double(object_centers[i]);
    for (int j = 0; j < static_cast<int>(decision_centers.size()); ++j) {
      out += ',';
      out += cell(i, j);
    }
    out += '\n';
  }
}

struct Check {
  std::string name;
  bool pass = false;
  ordered_json details;
};

ordered_json checks_json(const std::vector<Check>& checks) {
  ordered_json arr = ordered_json::array();
  for (const Check& c : checks) {
    ordered_json item;
    item["name"] = c.name;
    item["pass"] = c.pass;
    for (auto& [k, v] : c.details.items()) item[k] = v;
    arr.push_back(item);
  }
  return arr;
}

Check risk_in_ci_check(const std::string& name, double oracle, const mc::RiskEstimate& est) {
  Check c;
  c.name = name;
  c.pass = std::abs(est.estimate - oracle) <= est.half_width;
  c.details["oracle"] = oracle;
  c.details["estimate"] = est.estimate;
  c.details["ci_low"] = est.ci_low();
  c.details["ci_high"] = est.ci_high();
  c.details["tolerance"] = "ci";
  return c;
}

Check risk_near_check(const std::string& name, double reference, double tol,
                      const mc::RiskEstimate& est) {
  Check c;
  c.name = name;
  c.pass = std::abs(est.estimate - reference) <= tol;
  c.details["reference"] = reference;
  c.details["estimate"] = est.estimate;
  c.details["ci_low"] = est.ci_low();
  c.details["ci_high"] = est.ci_high();
  c.details["tolerance"] = tol;
  return c;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["subcommand"] = subcommand;
  j["scenario"] = scenario_ref;
  if (!params.empty()) j["params"] = params;
  j["seed"] = seed;
  j["samples"] = samples;
  j["proposal"] = proposal;
  j["confidence"] = confidence;
  j["grid"] = {{"decision_bins", decision_bins},
               {"object_bins", object_bins},
               {"decision_range", interval_json(decision_range)},
               {"object_range", interval_json(object_range)}};
  j["uniform_range"] = interval_json(uniform_range);
  j["literal_weighting"] = literal_weighting;
  j["topology"] = topology_spec;
  j["cost"] = cost_spec;
  j["bound"] = bound_method;
  j["features"] = features_path;
  j["soft"] = soft;
  j["analytic_grid"] = analytic_grid;
  j["threads"] = threads;
  j["out_dir"] = out_dir;
  j["engine_version"] = engine_version;
  return j;
}

std::shared_ptr<const Rule> make_rule(const LoadedScenario& loaded,
                                      const std::string& topology_spec) {
  net::FusionTopology topology = net::FusionTopology::centralized();
  if (!topology_spec.empty()) {
    topology = parse_topology_spec(topology_spec);
  } else if (loaded.topology) {
    topology = *loaded.topology;
  }
  return net::build_pbpo(loaded.scenario, topology);
}

void write_grid_csv(const std::string& path, const mc::PerformanceGrid& grid) {
  std::string out;
  append_grid_csv(out, grid.decision_centers, grid.object_centers, [&](int i, int j) {
    return grid.populated[i] ? format_double(grid.density(i, j)) : std::string("nan");
  });
  write_file(path, out);
}

int run_fuse(const RunManifest& manifest) {
  const LoadedScenario loaded = resolve_scenario_ref(manifest.scenario_ref);
  const auto rule = make_rule(loaded, manifest.topology_spec);
  if (manifest.features_path.empty()) {
    throw InputError("fuse: a features CSV is required");
  }
  const auto rows = read_features_csv(manifest.features_path, loaded.scenario->total_dims());
  std::string out = manifest.soft ? "decision,posterior_mean\n" : "decision\n";
  for (const auto& row : rows) {
    if (manifest.soft) {
      const double s = rule->soft(row);
      out += format_double(quantize(loaded.scenario->decision(), s));
      out += ',';
      out += format_double(s);
    } else {
      out += format_double(rule->fuse(row));
    }
    out += '\n';
  }
  ensure_dir(manifest.out_dir);
  write_file((fs::path(manifest.out_dir) / "decisions.csv").string(), out);
  write_manifest(manifest);
  return kExitOk;
}

int run_performance(const RunManifest& manifest) {
  const LoadedScenario loaded = resolve_scenario_ref(manifest.scenario_ref);
  const auto rule = make_rule(loaded, manifest.topology_spec);
  const mc::SampleBatch batch =
      mc::draw_batch(*loaded.scenario, manifest.samples, parse_mode(manifest.proposal),
                     manifest.seed, manifest.uniform_range, 0, manifest.threads);
  const mc::PerformanceGrid grid =
      mc::estimate_performance(*rule, batch, grid_spec_of(manifest), manifest.threads);

  ensure_dir(manifest.out_dir);
  write_grid_csv((fs::path(manifest.out_dir) / "performance.csv").string(), grid);

  double max_row_err = 0.0;
  ordered_json empty_rows = ordered_json::array();
  int populated = 0;
  for (int i = 0; i < static_cast<int>(grid.object_centers.size()); ++i) {
    if (grid.populated[i]) {
      ++populated;
      max_row_err = std::max(max_row_err, std::abs(grid.row_integral(i) - 1.0));
    } else {
      empty_rows.push_back(i);
    }
  }
  ordered_json sidecar;
  sidecar["subcommand"] = "performance";
  sidecar["scenario"] = manifest.scenario_ref;
  sidecar["engine_version"] = manifest.engine_version;
  sidecar["seed"] = manifest.seed;
  sidecar["samples"] = manifest.samples;
  sidecar["proposal"] = manifest.proposal;
  sidecar["uniform_range"] = interval_json(manifest.uniform_range);
  sidecar["grid"] = {{"decision_bins", static_cast<int>(grid.decision_centers.size())},
                     {"object_bins", static_cast<int>(grid.object_centers.size())},
                     {"decision_discrete", grid.decision_discrete},
                     {"object_discrete", grid.object_discrete}};
  sidecar["normalization"] = {
      {"populated_rows", populated},
      {"empty_rows", empty_rows},
      {"max_row_integral_error", max_row_err},
      {"out_of_range_object_samples", grid.out_of_range_object},
      {"out_of_range_decision_samples", grid.out_of_range_decision},
      {"out_of_range_decision_weight", grid.out_of_range_decision_weight}};
  sidecar["outputs"] = {{"csv", "performance.csv"}};
  write_json((fs::path(manifest.out_dir) / "performance.json").string(), sidecar);
  write_manifest(manifest);
  return kExitOk;
}

int run_risk(const RunManifest& manifest) {
  const LoadedScenario loaded = resolve_scenario_ref(manifest.scenario_ref);
  const auto rule = make_rule(loaded, manifest.topology_spec);
  const mc::SampleBatch batch =
      mc::draw_batch(*loaded.scenario, manifest.samples, parse_mode(manifest.proposal),
                     manifest.seed, manifest.uniform_range, 0, manifest.threads);
  const mc::RiskEstimate est =
      mc::estimate_risk(*rule, batch, cost_of(manifest, *loaded.scenario), manifest.confidence,
                        parse_bound(manifest.bound_method), manifest.threads);

  ordered_json doc;
  doc["estimate"] = est.estimate;
  doc["ci_low"] = est.ci_low();
  doc["ci_high"] = est.ci_high();
  doc["L"] = est.sample_count;
  doc["seed"] = manifest.seed;
  doc["method"] = est.method;
  doc["confidence"] = est.confidence;
  doc["proposal"] = manifest.proposal;
  doc["scenario"] = manifest.scenario_ref;
  doc["cost"] = manifest.cost_spec.empty() ? loaded.scenario->cost().describe()
                                           : manifest.cost_spec;
  doc["engine_version"] = manifest.engine_version;
  ensure_dir(manifest.out_dir);
  write_json((fs::path(manifest.out_dir) / "risk.json").string(), doc);
  write_manifest(manifest);
  return kExitOk;
}

int run_analytic(const RunManifest& manifest) {
  std::string name = manifest.scenario_ref;
  if (name.rfind("builtin:", 0) == 0) name = parse_builtin_ref(name).name;
  const auto param = [&](const char* key, double fallback) {
    const auto it = manifest.params.find(key);
    return it == manifest.params.end() ? fallback : it->second;
  };

  ordered_json doc;
  doc["scenario"] = name;
  std::string grid_csv;
  if (name == "gauss") {
    analytic::GaussParams p{param("u", 1.0), param("v", 1.0),
                            static_cast<int>(param("M", 2.0))};
    analytic::validate(p);
    doc["params"] = {{"u", p.u}, {"v", p.v}, {"M", p.M}};
    doc["rule"] = {{"form", "linear-sum"}, {"coefficient", p.u / (p.M * p.u * p.u + p.v)}};
    doc["risk"] = analytic::gauss_risk(p);
    if (manifest.analytic_grid) {
      if (!manifest.decision_range || !manifest.object_range) {
        throw InputError("analytic gauss grid requires explicit decision and object ranges");
      }
      mc::GridSpec spec = grid_spec_of(manifest);
      const auto dec = *spec.decision_range;
      const auto obj = *spec.object_range;
      std::vector<double> cs(spec.decision_bins), hs(spec.object_bins);
      for (int j = 0; j < spec.decision_bins; ++j) {
        cs[j] = dec.lo + dec.length() * (j + 0.5) / spec.decision_bins;
      }
      for (int i = 0; i < spec.object_bins; ++i) {
        hs[i] = obj.lo + obj.length() * (i + 0.5) / spec.object_bins;
      }
      append_grid_csv(grid_csv, cs, hs, [&](int i, int j) {
        return format_double(analytic::gauss_performance(p, cs[j], hs[i]));
      });
    }
  } else if (name == "expo") {
    analytic::ExpoParams p{static_cast<int>(param("M", 1.0))};
    analytic::validate(p);
    doc["params"] = {{"M", p.M}};
    doc["rule"] = {{"form", "shifted-reciprocal"}, {"numerator", p.M + 1.0}, {"offset", 1.0}};
    doc["risk"] = analytic::expo_risk(p);
    if (manifest.analytic_grid) {
      if (!manifest.decision_range || !manifest.object_range) {
        throw InputError("analytic expo grid requires explicit decision and object ranges");
      }
      mc::GridSpec spec = grid_spec_of(manifest);
      const auto dec = *spec.decision_range;
      const auto obj = *spec.object_range;
      std::vector<double> cs(spec.decision_bins), hs(spec.object_bins);
      for (int j = 0; j < spec.decision_bins; ++j) {
        cs[j] = dec.lo + dec.length() * (j + 0.5) / spec.decision_bins;
      }
      for (int i = 0; i < spec.object_bins; ++i) {
        hs[i] = obj.lo + obj.length() * (i + 0.5) / spec.object_bins;
      }
      append_grid_csv(grid_csv, cs, hs, [&](int i, int j) {
        return format_double(cs[j] > 0.0 ? analytic::expo_performance(p, cs[j], hs[i]) : 0.0);
      });
    }
  } else if (name == "pbpo-gauss") {
    analytic::GaussParams p{param("u", 1.0), param("v", 1.0),
                            static_cast<int>(param("M", 2.0))};
    const analytic::PbpoGauss out = analytic::pbpo_gauss(p);
    doc["params"] = {{"u", p.u}, {"v", p.v}, {"M", p.M}};
    doc["rule"] = {{"local_coeff", out.local_coeff}, {"system_coeff", out.system_coeff}};
    doc["risk"] = out.risk;
  } else if (name == "poisson-binary") {
    const analytic::BinaryRates rates = analytic::poisson_binary_rates();
    doc["rule"] = {{"form", "threshold"}, {"decide_low_iff_sum_at_most", 2}};
    doc["rates"] = {{"false_positive", rates.false_positive}, {"miss", rates.miss}};
  } else {
    throw InputError("analytic: unknown scenario '" + name +
                     "' (expected gauss, expo, pbpo-gauss or poisson-binary)");
  }
  doc["engine_version"] = manifest.engine_version;
  ensure_dir(manifest.out_dir);
  write_json((fs::path(manifest.out_dir) / "analytic.json").string(), doc);
  if (!grid_csv.empty()) {
    write_file((fs::path(manifest.out_dir) / "analytic_performance.csv").string(), grid_csv);
  }
  write_manifest(manifest);
  return kExitOk;
}

namespace {

std::vector<Check> validate_gauss(const RunManifest& manifest, double tol_agree) {
  const auto param = [&](const char* key, double fallback) {
    const auto it = manifest.params.find(key);
    return it == manifest.params.end() ? fallback : it->second;
  };
  analytic::GaussParams p{param("u", 1.0), param("v", 1.0), static_cast<int>(param("M", 2.0))};
  analytic::validate(p);
  std::ostringstream ref;
  ref << "builtin:gauss:u=" << p.u << ",v=" << p.v << ",M=" << p.M;
  const LoadedScenario loaded = resolve_scenario_ref(ref.str());
  const FusionRule rule(loaded.scenario);

  std::vector<Check> checks;
  const auto batch = mc::draw_batch(*loaded.scenario, manifest.samples, ProposalMode::Prior,
                                    manifest.seed, {}, 0, manifest.threads);
  const auto est = mc::estimate_risk(rule, batch, loaded.scenario->cost(), manifest.confidence,
                                     mc::BoundMethod::CltEmpirical, manifest.threads);
  checks.push_back(risk_in_ci_check("mc-risk-in-ci", analytic::gauss_risk(p), est));

  const auto probe = mc::draw_batch(*loaded.scenario, 1000, ProposalMode::Prior,
                                    manifest.seed + 1000003, {}, 0, manifest.threads);
  double max_err = 0.0;
  for (std::size_t l = 0; l < probe.size(); ++l) {
    max_err = std::max(max_err,
                       std::abs(rule.soft(probe.row(l)) - analytic::gauss_fusion(p, probe.row(l))));
  }
  Check agree;
  agree.name = "fusion-rule-agreement";
  agree.pass = max_err < tol_agree;
  agree.details["max_abs_error"] = max_err;
  agree.details["tolerance"] = tol_agree;
  checks.push_back(agree);
  return checks;
}

std::vector<Check> validate_expo(const RunManifest& manifest) {
  const auto it = manifest.params.find("M");
  analytic::ExpoParams p{it == manifest.params.end() ? 1 : static_cast<int>(it->second)};
  analytic::validate(p);
  const LoadedScenario loaded = resolve_scenario_ref("builtin:expo:M=" + std::to_string(p.M));
  const FusionRule rule(loaded.scenario);

  std::vector<Check> checks;
  const auto batch = mc::draw_batch(*loaded.scenario, manifest.samples, ProposalMode::Prior,
                                    manifest.seed, {}, 0, manifest.threads);
  const auto est = mc::estimate_risk(rule, batch, loaded.scenario->cost(), manifest.confidence,
                                     mc::BoundMethod::CltEmpirical, manifest.threads);
  checks.push_back(risk_in_ci_check("mc-risk-in-ci", analytic::expo_risk(p), est));

  double max_c = 0.0;
  for (std::size_t l = 0; l < batch.size(); ++l) max_c = std::max(max_c, rule.fuse(batch.row(l)));
  Check range;
  range.name = "no-mass-beyond-rule-range";
  range.pass = max_c <= p.M + 1.0;
  range.details["max_decision"] = max_c;
  range.details["bound"] = p.M + 1.0;
  checks.push_back(range);

  const auto probe = mc::draw_batch(*loaded.scenario, 1000, ProposalMode::Prior,
                                    manifest.seed + 1000003, {}, 0, manifest.threads);
  double max_err = 0.0;
  for (std::size_t l = 0; l < probe.size(); ++l) {
    max_err = std::max(max_err,
                       std::abs(rule.soft(probe.row(l)) - analytic::expo_fusion(p, probe.row(l))));
  }
  Check agree;
  agree.name = "fusion-rule-agreement";
  agree.pass = max_err < 1e-6;
  agree.details["max_abs_error"] = max_err;
  agree.details["tolerance"] = 1e-6;
  checks.push_back(agree);
  return checks;
}

std::vector<Check> validate_fourclass(const RunManifest& manifest, const std::string& name,
                                      double reference) {
  const LoadedScenario loaded = resolve_scenario_ref("builtin:" + name);
  const auto rule = make_rule(loaded, "");
  const auto batch = mc::draw_batch(*loaded.scenario, manifest.samples, ProposalMode::Prior,
                                    manifest.seed, {}, 0, manifest.threads);
  const auto est = mc::estimate_risk(*rule, batch, loaded.scenario->cost(), manifest.confidence,
                                     mc::BoundMethod::CltEmpirical, manifest.threads);
  return {risk_near_check("mc-risk-vs-reference", reference, 0.005, est)};
}

std::vector<Check> validate_poisson(const RunManifest&) {
  std::vector<Check> checks;
  const analytic::BinaryRates rates = analytic::poisson_binary_rates();
  const double fp_symbolic = 1.0 - 5.0 * std::exp(-2.0);
  const double miss_symbolic = 13.0 * std::exp(-4.0);

  Check fp;
  fp.name = "false-positive-rate";
  fp.pass = std::abs(rates.false_positive - fp_symbolic) <= 1e-12;
  fp.details["enumerated"] = rates.false_positive;
  fp.details["symbolic"] = fp_symbolic;
  fp.details["tolerance"] = 1e-12;
  checks.push_back(fp);

  Check miss;
  miss.name = "miss-rate";
  miss.pass = std::abs(rates.miss - miss_symbolic) <= 1e-12;
  miss.details["enumerated"] = rates.miss;
  miss.details["symbolic"] = miss_symbolic;
  miss.details["tolerance"] = 1e-12;
  checks.push_back(miss);

  const auto base_rule = [](int a, int b) { return a + b <= 2 ? 1 : 2; };
  const double base_risk = analytic::poisson_binary_rule_risk(base_rule);
  bool all_strict = true;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; b + a <= 2; ++b) {
      const double flipped = analytic::poisson_binary_rule_risk([&](int x, int y) {
        if (x == a && y == b) return 2;
        return base_rule(x, y);
      });
      min_gap = std::min(min_gap, flipped - base_risk);
      if (!(flipped > base_risk)) all_strict = false;
    }
  }
  Check flip;
  flip.name = "single-flip-optimality";
  flip.pass = all_strict;
  flip.details["base_risk"] = base_risk;
  flip.details["min_risk_increase"] = min_gap;
  checks.push_back(flip);
  return checks;
}

std::vector<Check> validate_mixture(const RunManifest& manifest) {
  const LoadedScenario loaded = resolve_scenario_ref("builtin:mixture");
  const FusionRule rule(loaded.scenario);
  const auto batch = mc::draw_batch(*loaded.scenario, manifest.samples, ProposalMode::Prior,
                                    manifest.seed, {}, 0, manifest.threads);
  double max_c = 0.0;
  for (std::size_t l = 0; l < batch.size(); ++l) max_c = std::max(max_c, rule.fuse(batch.row(l)));

  std::vector<Check> checks;
  Check bound;
  bound.name = "max-decision-bound";
  bound.pass = max_c < 2.6;
  bound.details["max_decision"] = max_c;
  bound.details["bound"] = 2.6;
  checks.push_back(bound);

  mc::GridSpec spec = grid_spec_of(manifest);
  const auto grid = mc::estimate_performance(rule, batch, spec, manifest.threads);
  double max_err = 0.0;
  for (int i = 0; i < static_cast<int>(grid.object_centers.size()); ++i) {
    if (grid.populated[i]) max_err = std::max(max_err, std::abs(grid.row_integral(i) - 1.0));
  }
  Check norm;
  norm.name = "grid-rows-normalized";
  norm.pass = max_err <= 1e-9;
  norm.details["max_row_integral_error"] = max_err;
  norm.details["tolerance"] = 1e-9;
  checks.push_back(norm);
  return checks;
}

}  // namespace

int run_validate(const RunManifest& manifest) {
  std::string name = manifest.scenario_ref;
  if (name.rfind("builtin:", 0) == 0) name = parse_builtin_ref(name).name;

  std::vector<Check> checks;
  if (name == "gauss") {
    checks = validate_gauss(manifest, 1e-8);
  } else if (name == "expo") {
    checks = validate_expo(manifest);
  } else if (name == "fourclass-hard") {
    checks = validate_fourclass(manifest, name, 0.43775);
  } else if (name == "fourclass-soft") {
    checks = validate_fourclass(manifest, name, 0.35536);
  } else if (name == "fourclass-pbpo") {
    checks = validate_fourclass(manifest, name, 0.57862);
  } else if (name == "poisson-binary") {
    checks = validate_poisson(manifest);
  } else if (name == "mixture") {
    checks = validate_mixture(manifest);
  } else {
    throw InputError("validate: unknown scenario '" + name +
                     "' (expected gauss, expo, fourclass-hard, fourclass-soft, fourclass-pbpo, "
                     "poisson-binary or mixture)");
  }

  bool all_pass = true;
  for (const Check& c : checks) all_pass = all_pass && c.pass;

  ordered_json doc;
  doc["subcommand"] = "validate";
  doc["scenario"] = name;
  if (!manifest.params.empty()) doc["params"] = manifest.params;
  doc["seed"] = manifest.seed;
  doc["samples"] = manifest.samples;
  doc["engine_version"] = manifest.engine_version;
  doc["checks"] = checks_json(checks);
  doc["pass"] = all_pass;
  ensure_dir(manifest.out_dir);
  write_json((fs::path(manifest.out_dir) / "validate.json").string(), doc);
  write_manifest(manifest);
  return all_pass ? kExitOk : kExitValidationFailure;
}

int run_manifest(const RunManifest& manifest) {
  if (manifest.subcommand == "fuse") return run_fuse(manifest);
  if (manifest.subcommand == "performance") return run_performance(manifest);
  if (manifest.subcommand == "risk") return run_risk(manifest);
  if (manifest.subcommand == "analytic") return run_analytic(manifest);
  if (manifest.subcommand == "validate") return run_validate(manifest);
  throw InputError("unknown subcommand '" + manifest.subcommand + "'");
}

}  // namespace bayesfuse
