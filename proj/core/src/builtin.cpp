#include "bayesfuse/builtin.hpp"

#include <cmath>

#include "bayesfuse/errors.hpp"

namespace bayesfuse {
namespace {

double param(const BuiltinSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

int int_param(const BuiltinSpec& spec, const std::string& key, int fallback) {
  const double v = param(spec, key, fallback);
  if (v != std::floor(v)) throw InputError("builtin: parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

LoadedScenario make_gauss(const BuiltinSpec& spec) {
  const double u = param(spec, "u", 1.0);
  const double v = param(spec, "v", 1.0);
  const int M = int_param(spec, "M", 2);
  if (M < 2 || M % 2 != 0) throw InputError("builtin gauss: M must be even and >= 2");
  const double inf = std::numeric_limits<double>::infinity();
  const ObjectSpace object = ObjectSpace::interval(-inf, inf);
  std::vector<std::shared_ptr<const Sensor>> sensors = {
      GaussianSensor::linear(M / 2, u, v),
      GaussianSensor::linear(M / 2, u, v),
  };
  LoadedScenario out;
  out.scenario = std::make_shared<Scenario>(object, Prior::standard_normal(object),
                                            std::move(sensors), DecisionSpace::interval(-inf, inf),
                                            CostFunction::squared_error(),
                                            /*even_cost_optimal=*/true);
  return out;
}

LoadedScenario make_expo(const BuiltinSpec& spec) {
  const int M = int_param(spec, "M", 1);
  if (M < 1) throw InputError("builtin expo: M must be >= 1");
  const double inf = std::numeric_limits<double>::infinity();
  const ObjectSpace object = ObjectSpace::interval(0.0, inf);
  std::vector<std::shared_ptr<const Sensor>> sensors;
  for (int m = 0; m < M; ++m) sensors.push_back(std::make_shared<ExponentialSensor>(1));
  LoadedScenario out;
  out.scenario = std::make_shared<Scenario>(object, Prior::exponential(object, 1.0),
                                            std::move(sensors), DecisionSpace::interval(0.0, inf),
                                            CostFunction::squared_error());
  return out;
}

// Four-class example: discrete classes {0,1,2,3}, equal prior, two 1-D
// Gaussian sensors with per-class spreads sigma_A = {1.7, 0.4, 3, 1} and
// sigma_B = {0.5, 2, 0.7, 2}.
LoadedScenario make_fourclass(const std::string& variant) {
  const std::vector<double> classes = {0.0, 1.0, 2.0, 3.0};
  const ObjectSpace object = ObjectSpace::points(classes);
  const std::vector<double> sigma_a = {1.7, 0.4, 3.0, 1.0};
  const std::vector<double> sigma_b = {0.5, 2.0, 0.7, 2.0};
  std::vector<double> var_a(4), var_b(4);
  for (int i = 0; i < 4; ++i) {
    var_a[i] = sigma_a[i] * sigma_a[i];
    var_b[i] = sigma_b[i] * sigma_b[i];
  }
  std::vector<std::shared_ptr<const Sensor>> sensors = {
      GaussianSensor::tabulated(classes, classes, var_a),
      GaussianSensor::tabulated(classes, classes, var_b),
  };
  DecisionSpace decision = DecisionSpace::interval(0.0, 3.0);
  std::optional<net::FusionTopology> topology;
  if (variant == "hard") {
    decision = DecisionSpace::points(classes);
  } else if (variant == "pbpo") {
    // Both stages quantize onto the class grid; see the validation table.
    decision = DecisionSpace::points(classes);
    topology = net::FusionTopology::pbpo({{0}, {1}}, DecisionSpace::points(classes));
  } else if (variant != "soft") {
    throw InputError("builtin fourclass: unknown variant '" + variant + "'");
  }
  LoadedScenario out;
  out.scenario = std::make_shared<Scenario>(
      object, Prior::discrete(object, {0.25, 0.25, 0.25, 0.25}), std::move(sensors), decision,
      CostFunction::squared_error());
  out.topology = topology;
  return out;
}

LoadedScenario make_poisson_binary() {
  const ObjectSpace object = ObjectSpace::points({1.0, 2.0});
  std::vector<std::shared_ptr<const Sensor>> sensors = {
      std::make_shared<PoissonSensor>(1),
      std::make_shared<PoissonSensor>(1),
  };
  LoadedScenario out;
  out.scenario = std::make_shared<Scenario>(object, Prior::discrete(object, {0.5, 0.5}),
                                            std::move(sensors),
                                            DecisionSpace::points({1.0, 2.0}),
                                            CostFunction::squared_error());
  return out;
}

LoadedScenario make_mixture() {
  const ObjectSpace object = ObjectSpace::interval(0.0, 4.0);
  std::vector<std::shared_ptr<const Sensor>> sensors = {
      std::make_shared<ExpUniformSensor>(),
      std::make_shared<GaussMixSensor>(0.01, 0.7, 3.0),
  };
  LoadedScenario out;
  out.scenario = std::make_shared<Scenario>(object, Prior::standard_normal(object),
                                            std::move(sensors), DecisionSpace::interval(0.0, 4.0),
                                            CostFunction::squared_error());
  return out;
}

}  // namespace

BuiltinSpec parse_builtin_ref(const std::string& ref) {
  std::string body = ref;
  if (body.rfind("builtin:", 0) == 0) body = body.substr(8);
  BuiltinSpec spec;
  const auto colon = body.find(':');
  spec.name = body.substr(0, colon);
  if (colon != std::string::npos) {
    std::string params = body.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < params.size()) {
      const auto comma = params.find(',', pos);
      const std::string kv = params.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InputError("builtin reference: malformed parameter '" + kv + "'");
      }
      try {
        spec.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw InputError("builtin reference: malformed parameter '" + kv + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (spec.name.empty()) throw InputError("builtin reference: empty name");
  return spec;
}

LoadedScenario make_builtin(const BuiltinSpec& spec) {
  if (spec.name == "gauss") return make_gauss(spec);
  if (spec.name == "expo") return make_expo(spec);
  if (spec.name == "fourclass-hard") return make_fourclass("hard");
  if (spec.name == "fourclass-soft") return make_fourclass("soft");
  if (spec.name == "fourclass-pbpo") return make_fourclass("pbpo");
  if (spec.name == "poisson-binary") return make_poisson_binary();
  if (spec.name == "mixture") return make_mixture();
  throw InputError("unknown builtin scenario '" + spec.name +
                   "' (expected gauss, expo, fourclass-hard, fourclass-soft, fourclass-pbpo, "
                   "poisson-binary or mixture)");
}

LoadedScenario resolve_scenario_ref(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return make_builtin(parse_builtin_ref(ref));
  return load_scenario_file(ref);
}

}  // namespace bayesfuse
