#pragma once

#include <memory>
#include <optional>
#include <string>

#include "bayesfuse/network.hpp"
#include "bayesfuse/scenario.hpp"

namespace bayesfuse {

struct LoadedScenario {
  std::shared_ptr<const Scenario> scenario;
  std::optional<net::FusionTopology> topology;
};

/// Parses the declarative scenario document (YAML tree with sections
/// object, prior, sensors[], decision, cost and an optional topology).
/// Field names are documented in the repository README.  Numbers are decimal
/// scalars and additionally accept "inf" / "-inf".
LoadedScenario load_scenario_file(const std::string& path);
LoadedScenario parse_scenario_text(const std::string& text);

/// Inline topology grammar for the command line:
///   "centralized"
///   "pbpo:groups=0,1|2,3:kstar=interval[lo;hi]"
///   "pbpo:groups=0|1:kstar=points[0;1;2;3]"
net::FusionTopology parse_topology_spec(const std::string& spec);

/// Cost override grammar: "quadratic", "squared-error", "power:p",
/// "poly:2=1.0,4=0.5", "zero".
CostFunction parse_cost_spec(const std::string& spec);

}  // namespace bayesfuse
