#pragma once

#include <memory>
#include <span>

#include "bayesfuse/scenario.hpp"

namespace bayesfuse {

/// Nearest point of the decision space; ties break toward the smaller point
/// so outputs are reproducible.
double quantize(const DecisionSpace& space, double x);

/// Index of quantize(space, x) in the point list (discrete spaces only).
int quantize_index(const DecisionSpace& space, double x);

/// Posterior expectation E[H | A = a]: the quotient of prior-weighted
/// integrals, computed as an exact weighted sum for discrete priors and via
/// the prior's fixed quadrature rule otherwise.  All density products are
/// accumulated in log space.  Throws DegeneracyError when every node carries
/// zero likelihood.
double posterior_mean(const Scenario& scenario, std::span<const double> a);

/// A deterministic fusion rule a -> c.
class Rule {
 public:
  virtual ~Rule() = default;
  /// Quantized decision in the decision space.
  virtual double fuse(std::span<const double> a) const = 0;
  /// Pre-quantization value; defaults to the decision itself.
  virtual double soft(std::span<const double> a) const { return fuse(a); }
  virtual const Scenario& scenario() const = 0;
};

/// The Bayes-optimal deterministic rule: posterior mean composed with
/// decision-space quantization.
class FusionRule : public Rule {
 public:
  explicit FusionRule(std::shared_ptr<const Scenario> scenario);
  double soft(std::span<const double> a) const override;
  double fuse(std::span<const double> a) const override;
  const Scenario& scenario() const override { return *scenario_; }
  std::shared_ptr<const Scenario> scenario_ptr() const { return scenario_; }

 private:
  std::shared_ptr<const Scenario> scenario_;
};

}  // namespace bayesfuse
