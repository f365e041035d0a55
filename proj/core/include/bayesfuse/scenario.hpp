#pragma once

#include <memory>
#include <vector>

#include "bayesfuse/cost.hpp"
#include "bayesfuse/prior.hpp"
#include "bayesfuse/sensor.hpp"
#include "bayesfuse/spaces.hpp"

namespace bayesfuse {

/// Complete problem statement: object space, prior, sensors, decision space
/// and cost.  Immutable after construction.
class Scenario {
 public:
  Scenario(ObjectSpace object, Prior prior, std::vector<std::shared_ptr<const Sensor>> sensors,
           DecisionSpace decision, CostFunction cost, bool even_cost_optimal = false);

  const ObjectSpace& object() const { return object_; }
  const Prior& prior() const { return prior_; }
  const DecisionSpace& decision() const { return decision_; }
  const CostFunction& cost() const { return cost_; }

  int sensor_count() const { return static_cast<int>(sensors_.size()); }
  const Sensor& sensor(int m) const { return *sensors_[m]; }
  std::shared_ptr<const Sensor> sensor_ptr(int m) const { return sensors_[m]; }

  /// Total joint feature dimension (sum over sensors).
  int total_dims() const { return total_dims_; }
  /// Offset of sensor m's block inside a joint feature vector.
  int block_offset(int m) const { return offsets_[m]; }
  std::span<const double> block(std::span<const double> joint, int m) const {
    return joint.subspan(offsets_[m], sensors_[m]->dims());
  }

  /// True when the scenario is known to satisfy the even-convex-cost
  /// optimality conditions (the posterior-mean rule is optimal beyond the
  /// quadratic cost, and the conservative risk bound applies).
  bool even_cost_optimal() const { return even_cost_optimal_; }

 private:
  ObjectSpace object_;
  Prior prior_;
  std::vector<std::shared_ptr<const Sensor>> sensors_;
  DecisionSpace decision_;
  CostFunction cost_;
  std::vector<int> offsets_;
  int total_dims_ = 0;
  bool even_cost_optimal_ = false;
};

}  // namespace bayesfuse
