#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bayesfuse/fusion.hpp"
#include "bayesfuse/scenario.hpp"

namespace bayesfuse::net {

/// Fusion-network layout: centralized, or a two-stage tree where sensor
/// groups are reduced onto an intermediate decision space K* and the reduced
/// outputs are fused onto the system decision space.
struct FusionTopology {
  enum class Kind { Centralized, Pbpo };
  Kind kind = Kind::Centralized;
  std::vector<std::vector<int>> groups;          // partition of sensor indices
  std::optional<DecisionSpace> inner_decision;   // K*

  static FusionTopology centralized() { return {}; }
  static FusionTopology pbpo(std::vector<std::vector<int>> groups, DecisionSpace inner) {
    FusionTopology t;
    t.kind = Kind::Pbpo;
    t.groups = std::move(groups);
    t.inner_decision = std::move(inner);
    return t;
  }
};

/// Composes the two-stage rule.  Stage 1 reduces each group with its own
/// locally optimal rule onto K*; stage 2 treats the reduced outputs as
/// derived sensors (their conditional densities obtained analytically for
/// Gaussian linear groups, by pass-through for single 1-D sensors with a
/// covering interval K*, or by exact boundary tabulation for 1-D Gaussian
/// groups with discrete K* and discrete object space) and fuses them onto the
/// system decision space.  Unsupported combinations raise
/// UnsupportedConfigError naming the gap.  Centralized topologies return the
/// plain rule.
std::shared_ptr<const Rule> build_pbpo(std::shared_ptr<const Scenario> scenario,
                                       const FusionTopology& topology);

/// Access to the derived stage-2 scenario of a composed rule (empty for
/// centralized rules); exposed for validation.
std::shared_ptr<const Scenario> stage2_scenario(const Rule& rule);

}  // namespace bayesfuse::net
