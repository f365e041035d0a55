#include "bayesfuse/scenario.hpp"

#include "bayesfuse/errors.hpp"

namespace bayesfuse {

Scenario::Scenario(ObjectSpace object, Prior prior,
                   std::vector<std::shared_ptr<const Sensor>> sensors, DecisionSpace decision,
                   CostFunction cost, bool even_cost_optimal)
    : object_(std::move(object)),
      prior_(std::move(prior)),
      sensors_(std::move(sensors)),
      decision_(std::move(decision)),
      cost_(std::move(cost)),
      even_cost_optimal_(even_cost_optimal) {
  if (sensors_.empty()) throw InputError("scenario: at least one sensor is required");
  if (!(prior_.space() == object_)) {
    throw InputError("scenario: prior must be defined over the object space");
  }
  offsets_.reserve(sensors_.size());
  for (const auto& s : sensors_) {
    if (!s) throw InputError("scenario: null sensor");
    offsets_.push_back(total_dims_);
    total_dims_ += s->dims();
  }
}

}  // namespace bayesfuse
