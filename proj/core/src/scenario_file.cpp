#include "bayesfuse/scenario_file.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "bayesfuse/errors.hpp"

namespace bayesfuse {
namespace {

double parse_number(const std::string& text) {
  std::string t = text;
  if (t == "inf" || t == "+inf" || t == ".inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf" || t == "-.inf") return -std::numeric_limits<double>::infinity();
  std::size_t consumed = 0;
  double value;
  try {
    value = std::stod(t, &consumed);
  } catch (const std::exception&) {
    throw InputError("scenario file: cannot parse number '" + text + "'");
  }
  if (consumed != t.size()) {
    throw InputError("scenario file: trailing characters in number '" + text + "'");
  }
  return value;
}

double number(const YAML::Node& node, const char* what) {
  if (!node || !node.IsScalar()) {
    throw InputError(std::string("scenario file: missing numeric field '") + what + "'");
  }
  return parse_number(node.as<std::string>());
}

double number_or(const YAML::Node& node, double fallback) {
  if (!node) return fallback;
  return parse_number(node.as<std::string>());
}

int integer(const YAML::Node& node, const char* what) {
  const double v = number(node, what);
  if (v != std::floor(v)) throw InputError(std::string("scenario file: '") + what + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> number_list(const YAML::Node& node, const char* what) {
  if (!node || !node.IsSequence()) {
    throw InputError(std::string("scenario file: '") + what + "' must be a list of numbers");
  }
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& item : node) out.push_back(parse_number(item.as<std::string>()));
  return out;
}

std::string text(const YAML::Node& node, const char* what) {
  if (!node || !node.IsScalar()) {
    throw InputError(std::string("scenario file: missing field '") + what + "'");
  }
  return node.as<std::string>();
}

ObjectSpace parse_object(const YAML::Node& node) {
  if (!node) throw InputError("scenario file: missing 'object' section");
  const std::string kind = text(node["kind"], "object.kind");
  if (kind == "interval") {
    return ObjectSpace::interval(number(node["lo"], "object.lo"), number(node["hi"], "object.hi"));
  }
  if (kind == "points") {
    return ObjectSpace::points(number_list(node["points"], "object.points"));
  }
  throw InputError("scenario file: object.kind must be 'interval' or 'points'");
}

Prior parse_prior(const YAML::Node& node, const ObjectSpace& object) {
  if (!node) throw InputError("scenario file: missing 'prior' section");
  const std::string form = text(node["form"], "prior.form");
  if (form == "discrete") {
    return Prior::discrete(object, number_list(node["weights"], "prior.weights"));
  }
  if (form == "std-normal") return Prior::standard_normal(object);
  if (form == "exponential") return Prior::exponential(object, number_or(node["rate"], 1.0));
  if (form == "tabulated") {
    const bool normalize = node["normalize"] ? node["normalize"].as<bool>() : false;
    return Prior::tabulated(object, number_list(node["values"], "prior.values"), normalize);
  }
  throw InputError("scenario file: unknown prior.form '" + form + "'");
}

std::shared_ptr<const Sensor> parse_sensor(const YAML::Node& node, const ObjectSpace& object);

std::shared_ptr<const Sensor> parse_gaussian(const YAML::Node& node, const ObjectSpace& object) {
  const int dims = node["dims"] ? integer(node["dims"], "sensor.dims") : 1;
  const YAML::Node mean = node["mean"];
  const YAML::Node cov = node["cov"];
  if (!mean || !cov) throw InputError("scenario file: gaussian sensor needs 'mean' and 'cov'");
  const std::string mean_kind = text(mean["kind"], "sensor.mean.kind");
  const std::string cov_kind = text(cov["kind"], "sensor.cov.kind");

  if (mean_kind == "table" || cov_kind == "table") {
    if (mean_kind != "table" || cov_kind != "table") {
      throw InputError("scenario file: tabulated gaussian sensors tabulate both mean and cov");
    }
    if (!object.discrete()) {
      throw InputError("scenario file: tabulated gaussian sensors require a discrete object space");
    }
    if (dims != 1) throw InputError("scenario file: tabulated gaussian sensors are 1-D");
    return GaussianSensor::tabulated(object.point_list(),
                                     number_list(mean["values"], "sensor.mean.values"),
                                     number_list(cov["values"], "sensor.cov.values"));
  }
  if (mean_kind != "linear") {
    throw InputError("scenario file: sensor.mean.kind must be 'linear' or 'table'");
  }
  const double slope = number(mean["slope"], "sensor.mean.slope");
  if (cov_kind == "scalar") {
    return GaussianSensor::linear(dims, slope, number(cov["value"], "sensor.cov.value"));
  }
  if (cov_kind == "factor" || cov_kind == "matrix") {
    const YAML::Node rows = cov["rows"];
    if (!rows || !rows.IsSequence() || static_cast<int>(rows.size()) != dims) {
      throw InputError("scenario file: sensor.cov.rows must be a dims x dims matrix");
    }
    Eigen::MatrixXd m(dims, dims);
    for (int i = 0; i < dims; ++i) {
      const std::vector<double> row = number_list(rows[i], "sensor.cov.rows");
      if (static_cast<int>(row.size()) != dims) {
        throw InputError("scenario file: sensor.cov.rows must be a dims x dims matrix");
      }
      for (int j = 0; j < dims; ++j) m(i, j) = row[j];
    }
    return cov_kind == "factor" ? GaussianSensor::linear_factor(dims, slope, std::move(m))
                                : GaussianSensor::linear_covariance(dims, slope, m);
  }
  throw InputError("scenario file: unknown sensor.cov.kind '" + cov_kind + "'");
}

std::shared_ptr<const Sensor> parse_sensor(const YAML::Node& node, const ObjectSpace& object) {
  const std::string family = text(node["family"], "sensor.family");
  if (family == "gaussian") return parse_gaussian(node, object);
  if (family == "exponential") {
    return std::make_shared<ExponentialSensor>(node["dims"] ? integer(node["dims"], "dims") : 1);
  }
  if (family == "poisson") {
    return std::make_shared<PoissonSensor>(node["dims"] ? integer(node["dims"], "dims") : 1);
  }
  if (family == "exp-uniform-mixture") return std::make_shared<ExpUniformSensor>();
  if (family == "gauss-pair-mixture") {
    return std::make_shared<GaussMixSensor>(number_or(node["sharp_var"], 0.01),
                                            number_or(node["center"], 0.7),
                                            number_or(node["width_scale"], 3.0));
  }
  if (family == "discrete") {
    if (!object.discrete()) {
      throw InputError("scenario file: discrete sensors require a discrete object space");
    }
    const std::vector<double> values = number_list(node["values"], "sensor.values");
    const YAML::Node rows = node["pmf"];
    if (!rows || !rows.IsSequence() || rows.size() != object.point_list().size()) {
      throw InputError("scenario file: sensor.pmf must have one row per object point");
    }
    Eigen::MatrixXd pmf(rows.size(), values.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::vector<double> row = number_list(rows[i], "sensor.pmf");
      if (row.size() != values.size()) {
        throw InputError("scenario file: sensor.pmf rows must match the value count");
      }
      for (std::size_t j = 0; j < values.size(); ++j) pmf(i, j) = row[j];
    }
    return std::make_shared<DiscreteSensor>(object.point_list(), values, std::move(pmf));
  }
  if (family == "mixture") {
    const YAML::Node comps = node["components"];
    if (!comps || !comps.IsSequence()) {
      throw InputError("scenario file: mixture sensor needs a 'components' list");
    }
    std::vector<std::shared_ptr<const Sensor>> components;
    for (const auto& c : comps) components.push_back(parse_sensor(c, object));
    return std::make_shared<MixtureSensor>(std::move(components),
                                           number_list(node["weights"], "sensor.weights"));
  }
  throw InputError("scenario file: unknown sensor family '" + family + "'");
}

DecisionSpace parse_decision(const YAML::Node& node) {
  if (!node) throw InputError("scenario file: missing 'decision' section");
  const std::string kind = text(node["kind"], "decision.kind");
  if (kind == "interval") {
    return DecisionSpace::interval(number(node["lo"], "decision.lo"),
                                   number(node["hi"], "decision.hi"));
  }
  if (kind == "points") return DecisionSpace::points(number_list(node["points"], "decision.points"));
  if (kind == "union") {
    const YAML::Node ivs = node["intervals"];
    if (!ivs || !ivs.IsSequence()) {
      throw InputError("scenario file: decision union needs an 'intervals' list");
    }
    std::vector<Interval> parts;
    for (const auto& iv : ivs) {
      const std::vector<double> pair = number_list(iv, "decision.intervals");
      if (pair.size() != 2) throw InputError("scenario file: union intervals are [lo, hi] pairs");
      parts.push_back(Interval{pair[0], pair[1]});
    }
    return DecisionSpace::interval_union(std::move(parts));
  }
  throw InputError("scenario file: decision.kind must be 'interval', 'points' or 'union'");
}

CostFunction parse_cost(const YAML::Node& node) {
  if (!node) throw InputError("scenario file: missing 'cost' section");
  const std::string form = text(node["form"], "cost.form");
  if (form == "quadratic") return CostFunction::quadratic();
  if (form == "squared-error") return CostFunction::squared_error();
  if (form == "power") return CostFunction::even_power(integer(node["p"], "cost.p"));
  if (form == "poly") {
    const YAML::Node coeffs = node["coeffs"];
    if (!coeffs || !coeffs.IsMap()) throw InputError("scenario file: cost.coeffs must be a map");
    std::vector<std::pair<int, double>> pairs;
    for (const auto& kv : coeffs) {
      pairs.emplace_back(static_cast<int>(parse_number(kv.first.as<std::string>())),
                         parse_number(kv.second.as<std::string>()));
    }
    return CostFunction::even_polynomial(std::move(pairs));
  }
  throw InputError("scenario file: unknown cost.form '" + form + "'");
}

net::FusionTopology parse_topology(const YAML::Node& node) {
  const std::string kind = text(node["kind"], "topology.kind");
  if (kind == "centralized") return net::FusionTopology::centralized();
  if (kind != "pbpo") throw InputError("scenario file: topology.kind must be 'centralized' or 'pbpo'");
  const YAML::Node groups = node["groups"];
  if (!groups || !groups.IsSequence()) {
    throw InputError("scenario file: topology.groups must be a list of index lists");
  }
  std::vector<std::vector<int>> gs;
  for (const auto& g : groups) {
    std::vector<int> idx;
    for (const auto& v : g) idx.push_back(static_cast<int>(parse_number(v.as<std::string>())));
    gs.push_back(std::move(idx));
  }
  return net::FusionTopology::pbpo(std::move(gs), parse_decision(node["inner_decision"]));
}

LoadedScenario parse_root(const YAML::Node& root) {
  if (!root || !root.IsMap()) throw InputError("scenario file: document must be a key/value tree");
  const ObjectSpace object = parse_object(root["object"]);
  Prior prior = parse_prior(root["prior"], object);
  const YAML::Node sensors = root["sensors"];
  if (!sensors || !sensors.IsSequence() || sensors.size() == 0) {
    throw InputError("scenario file: 'sensors' must be a non-empty list");
  }
  std::vector<std::shared_ptr<const Sensor>> parsed;
  for (const auto& s : sensors) parsed.push_back(parse_sensor(s, object));
  const DecisionSpace decision = parse_decision(root["decision"]);
  CostFunction cost = parse_cost(root["cost"]);
  const bool tagged =
      root["even_cost_optimal"] ? root["even_cost_optimal"].as<bool>() : false;

  LoadedScenario loaded;
  loaded.scenario = std::make_shared<Scenario>(object, std::move(prior), std::move(parsed),
                                               decision, std::move(cost), tagged);
  if (root["topology"]) loaded.topology = parse_topology(root["topology"]);
  return loaded;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

LoadedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario_text(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

LoadedScenario parse_scenario_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("scenario file: YAML parse error: ") + e.what());
  }
  return parse_root(root);
}

net::FusionTopology parse_topology_spec(const std::string& spec) {
  if (spec.empty() || spec == "centralized") return net::FusionTopology::centralized();
  const std::vector<std::string> parts = split(spec, ':');
  if (parts[0] != "pbpo") {
    throw InputError("topology spec: expected 'centralized' or 'pbpo:...', got '" + spec + "'");
  }
  std::vector<std::vector<int>> groups;
  std::optional<DecisionSpace> kstar;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError("topology spec: malformed segment '" + part + "'");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key == "groups") {
      for (const std::string& g : split(value, '|')) {
        std::vector<int> idx;
        for (const std::string& v : split(g, ',')) {
          if (!v.empty()) idx.push_back(std::stoi(v));
        }
        groups.push_back(std::move(idx));
      }
    } else if (key == "kstar") {
      const auto open = value.find('[');
      const auto close = value.rfind(']');
      if (open == std::string::npos || close == std::string::npos || close < open) {
        throw InputError("topology spec: kstar must be interval[lo;hi] or points[p;...]");
      }
      const std::string shape = value.substr(0, open);
      std::vector<double> nums;
      for (const std::string& v : split(value.substr(open + 1, close - open - 1), ';')) {
        if (!v.empty()) nums.push_back(parse_number(v));
      }
      if (shape == "interval") {
        if (nums.size() != 2) throw InputError("topology spec: interval needs [lo;hi]");
        kstar = DecisionSpace::interval(nums[0], nums[1]);
      } else if (shape == "points") {
        kstar = DecisionSpace::points(nums);
      } else {
        throw InputError("topology spec: unknown kstar shape '" + shape + "'");
      }
    } else {
      throw InputError("topology spec: unknown key '" + key + "'");
    }
  }
  if (groups.empty() || !kstar) {
    throw InputError("topology spec: pbpo needs both groups= and kstar=");
  }
  return net::FusionTopology::pbpo(std::move(groups), std::move(*kstar));
}

CostFunction parse_cost_spec(const std::string& spec) {
  if (spec == "quadratic") return CostFunction::quadratic();
  if (spec == "squared-error") return CostFunction::squared_error();
  if (spec == "zero") return CostFunction::even_polynomial({});
  if (spec.rfind("power:", 0) == 0) return CostFunction::even_power(std::stoi(spec.substr(6)));
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<std::pair<int, double>> pairs;
    for (const std::string& kv : split(spec.substr(5), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InputError("cost spec: malformed term '" + kv + "'");
      pairs.emplace_back(std::stoi(kv.substr(0, eq)), parse_number(kv.substr(eq + 1)));
    }
    return CostFunction::even_polynomial(std::move(pairs));
  }
  throw InputError("cost spec: unknown form '" + spec + "'");
}

}  // namespace bayesfuse
