#pragma once

#include <map>
#include <string>

#include "bayesfuse/scenario_file.hpp"

namespace bayesfuse {

/// Named scenarios generated programmatically from the built-in parameter
/// tables (single source of truth; there are no data files behind them).
/// Names: gauss (u, v, M), expo (M), fourclass-hard, fourclass-soft,
/// fourclass-pbpo, poisson-binary, mixture.
struct BuiltinSpec {
  std::string name;
  std::map<std::string, double> params;
};

/// Parses "builtin:gauss:u=1,v=1,M=2" or a bare name like "gauss".
BuiltinSpec parse_builtin_ref(const std::string& ref);

LoadedScenario make_builtin(const BuiltinSpec& spec);

/// Loads a scenario from a "builtin:..." reference or a file path.
LoadedScenario resolve_scenario_ref(const std::string& ref);

}  // namespace bayesfuse
