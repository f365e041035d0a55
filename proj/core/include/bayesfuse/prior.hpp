#pragma once

#include <optional>
#include <vector>

#include "bayesfuse/rng.hpp"
#include "bayesfuse/spaces.hpp"

namespace bayesfuse {

/// Fixed quadrature sizes pairing each continuous prior with a deterministic
/// integration rule (reproducible fusion evaluations).
inline constexpr int kHermiteNodes = 64;    // standard normal on the real line
inline constexpr int kLaguerreNodes = 64;   // exponential on [0, inf)
inline constexpr int kLegendreNodes = 128;  // bounded intervals

enum class ProposalMode { Prior, Uniform };

/// Prior d_H over an ObjectSpace.  Continuous forms are restricted to the
/// object space and normalized there; each form carries its quadrature
/// nodes/weights so that sum_i w_i g(h_i) ~ E[g(H)].
class Prior {
 public:
  enum class Form { Discrete, StdNormal, Exponential, Tabulated };

  static Prior discrete(const ObjectSpace& over, std::vector<double> weights);
  static Prior standard_normal(const ObjectSpace& over);
  static Prior exponential(const ObjectSpace& over, double rate);
  /// values: density samples at the kLegendreNodes Gauss-Legendre nodes of the
  /// bounded object interval; interpreted as a piecewise-linear density.
  static Prior tabulated(const ObjectSpace& over, std::vector<double> values,
                         bool normalize = false);

  Form form() const { return form_; }
  const ObjectSpace& space() const { return space_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& log_node_weights() const { return log_weights_; }

  /// Exponential form only: the prior rate and the raw Laguerre rule
  /// (nodes/weights for weight e^{-x}), used for decay-rescaled quadrature.
  double exponential_rate() const { return rate_; }
  const std::vector<double>& laguerre_x() const { return laguerre_x_; }
  const std::vector<double>& laguerre_log_w() const { return laguerre_log_w_; }

  /// Normalized density over the object space (continuous forms only).
  double density(double h) const;
  /// Point weight for discrete priors; h must be one of the object points.
  double discrete_weight(double h) const;
  const std::vector<double>& discrete_weights() const { return weights_; }
  /// P(a < H <= b).
  double mass(double a, double b) const;

  double sample(RandomStream& rng) const;

 private:
  Prior() = default;
  void finalize_nodes(std::vector<double> nodes, std::vector<double> weights);

  Form form_ = Form::Discrete;
  ObjectSpace space_;
  std::vector<double> nodes_;
  std::vector<double> weights_;      // linear, sum exactly normalized to 1
  std::vector<double> log_weights_;
  std::vector<double> cumulative_;   // discrete sampling
  double rate_ = 1.0;                // exponential form
  std::vector<double> laguerre_x_, laguerre_log_w_;
  double trunc_mass_ = 1.0;          // standard normal restricted to a bounded interval
  // piecewise-linear tabulation (node grid extended to the interval endpoints)
  std::vector<double> tab_x_, tab_v_, tab_cum_;
  double tab_total_ = 1.0;
};

struct PriorDraw {
  double h;
  double weight;  // importance weight d_H(h) / d_{H'}(h)
};

/// Draws h from the proposal d_{H'}: either the prior itself (weight 1) or a
/// uniform distribution on the object space.  A uniform proposal over an
/// unbounded continuous object space is rejected unless an explicit bounded
/// `uniform_range` inside the space is supplied.
PriorDraw sample_proposal(const Prior& prior, ProposalMode mode, RandomStream& rng,
                          const std::optional<Interval>& uniform_range = {});

}  // namespace bayesfuse
