#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bayesfuse/rng.hpp"
#include "bayesfuse/spaces.hpp"

namespace bayesfuse {

/// A conditional feature density d_{A|H}(a, h) that can be evaluated
/// pointwise (in log form for underflow safety) and sampled exactly for a
/// given h.  Implementations are immutable after construction.
class Sensor {
 public:
  virtual ~Sensor() = default;

  virtual const FeatureSpace& space() const = 0;
  int dims() const { return space().dims(); }

  virtual double log_density(std::span<const double> a, double h) const = 0;
  double density(std::span<const double> a, double h) const {
    return std::exp(log_density(a, h));
  }

  /// acc[i] += log_density(a, nodes[i]).  Families with a low-dimensional
  /// sufficient statistic override this so the per-node work is O(1).
  virtual void accumulate_log_density(std::span<const double> a, std::span<const double> nodes,
                                      std::span<double> acc) const;

  virtual void sample(double h, RandomStream& rng, std::span<double> out) const = 0;

  /// Throws if h is outside the family's parameter domain (e.g. rate
  /// families need h > 0).
  virtual void check_h(double h) const {}

  /// When log d(a, h) = k(a) + p(a) log h - rate(a) * h, returns rate(a).
  /// Exponential priors rescale their Laguerre nodes by the total rate so the
  /// posterior quadrature stays exact however sharply the likelihood
  /// concentrates.  Families without this structure return nullopt.
  virtual std::optional<double> h_exponential_decay(std::span<const double> a) const {
    return std::nullopt;
  }

  /// When log d(a, h) = k(a) + linear * h - precision * h^2 / 2, returns the
  /// pair.  Standard-normal priors recenter and rescale their Hermite nodes
  /// onto the posterior, which keeps the quadrature exact for any number of
  /// Gaussian features.  Families without this structure return nullopt.
  struct GaussianHDecay {
    double precision;
    double linear;
  };
  virtual std::optional<GaussianHDecay> h_gaussian_decay(std::span<const double> a) const {
    return std::nullopt;
  }

  virtual std::shared_ptr<const Sensor> clone() const = 0;
};

/// Gaussian features: mean is linear in h or tabulated per object class;
/// covariance is spherical, a fixed lower-triangular factor, or a tabulated
/// per-class scalar variance.
class GaussianSensor : public Sensor {
 public:
  struct LinearMean {
    double slope = 1.0;
  };
  struct TabulatedMean {
    std::vector<double> h_points;           // strictly sorted
    std::vector<Eigen::VectorXd> means;     // one vector per h point
  };
  struct SphericalCov {
    double variance = 1.0;
  };
  struct FactorCov {
    Eigen::MatrixXd factor;  // lower triangular, positive diagonal
  };
  struct TabulatedCov {
    std::vector<double> h_points;
    std::vector<double> variances;  // scalar variance per h point
  };

  static std::shared_ptr<const GaussianSensor> linear(int dims, double mean_slope,
                                                      double variance);
  static std::shared_ptr<const GaussianSensor> linear_factor(int dims, double mean_slope,
                                                             Eigen::MatrixXd lower_factor);
  /// Full covariance matrix; factored internally (Cholesky).
  static std::shared_ptr<const GaussianSensor> linear_covariance(int dims, double mean_slope,
                                                                 const Eigen::MatrixXd& cov);
  static std::shared_ptr<const GaussianSensor> tabulated(std::vector<double> h_points,
                                                         std::vector<double> means,
                                                         std::vector<double> variances);

  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void accumulate_log_density(std::span<const double> a, std::span<const double> nodes,
                              std::span<double> acc) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  std::optional<GaussianHDecay> h_gaussian_decay(std::span<const double> a) const override;
  std::shared_ptr<const Sensor> clone() const override;

  bool is_linear_spherical() const { return linear_.has_value() && spherical_.has_value(); }
  double mean_slope() const;
  double spherical_variance() const;
  /// Per-class scalar parameters for 1-D sensors (used by the distributed
  /// composition to tabulate stage-2 densities).
  bool scalar_class_params(double h, double* mean, double* variance) const;

 private:
  GaussianSensor() = default;
  std::size_t class_index(double h) const;

  FeatureSpace space_ = FeatureSpace::real_line(1);
  std::optional<LinearMean> linear_;
  std::optional<TabulatedMean> tab_mean_;
  std::optional<SphericalCov> spherical_;
  std::optional<FactorCov> factor_;
  std::optional<TabulatedCov> tab_cov_;
  // cached factor quantities
  double log_det_half_ = 0.0;          // sum log L_ii
  Eigen::VectorXd ones_solved_;        // L^{-1} 1
  double ones_norm2_ = 0.0;            // |L^{-1} 1|^2
};

/// Exponential features with rate h (requires h > 0); iid across dims.
class ExponentialSensor : public Sensor {
 public:
  explicit ExponentialSensor(int dims = 1);
  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void accumulate_log_density(std::span<const double> a, std::span<const double> nodes,
                              std::span<double> acc) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  void check_h(double h) const override;
  std::optional<double> h_exponential_decay(std::span<const double> a) const override;
  std::shared_ptr<const Sensor> clone() const override;

 private:
  FeatureSpace space_;
};

/// Poisson counts with rate h (requires h >= 0); iid across dims.
class PoissonSensor : public Sensor {
 public:
  explicit PoissonSensor(int dims = 1);
  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void accumulate_log_density(std::span<const double> a, std::span<const double> nodes,
                              std::span<double> acc) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  void check_h(double h) const override;
  std::optional<double> h_exponential_decay(std::span<const double> a) const override;
  std::shared_ptr<const Sensor> clone() const override;

 private:
  FeatureSpace space_;
};

/// Equal-weight mixture of an exponential with rate h and a uniform on
/// [0, h]: d(a, h) = (h/2) e^{-h a} + (1/(2h)) 1[a <= h].  Requires h > 0.
class ExpUniformSensor : public Sensor {
 public:
  ExpUniformSensor();
  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  void check_h(double h) const override;
  std::shared_ptr<const Sensor> clone() const override;

 private:
  FeatureSpace space_;
};

/// Equal-weight mixture of a sharp Gaussian tracking h and a fixed-center
/// Gaussian whose spread shrinks with h:
/// d(a, h) = (1/2) N(a; h, sharp_var) + (1/2) N(a; center, (width_scale/h)^2).
/// Requires h > 0.
class GaussMixSensor : public Sensor {
 public:
  GaussMixSensor(double sharp_var, double center, double width_scale);
  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  void check_h(double h) const override;
  std::shared_ptr<const Sensor> clone() const override;

 private:
  FeatureSpace space_;
  double sharp_var_, center_, width_scale_;
};

/// Finite mixture of base sensors with explicit weights.  Weights must sum to
/// 1 exactly (within 1e-12); no implicit renormalization.
class MixtureSensor : public Sensor {
 public:
  MixtureSensor(std::vector<std::shared_ptr<const Sensor>> components,
                std::vector<double> weights);
  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  void check_h(double h) const override;
  std::shared_ptr<const Sensor> clone() const override;

 private:
  FeatureSpace space_;
  std::vector<std::shared_ptr<const Sensor>> components_;
  std::vector<double> weights_, cumulative_;
};

/// Discrete 1-D feature with a tabulated conditional pmf over a discrete
/// object space; also the derived-sensor representation for quantized
/// fusion-center outputs.
class DiscreteSensor : public Sensor {
 public:
  /// pmf(i, j) = P(A = value_j | H = h_points[i]); rows must sum to 1.
  DiscreteSensor(std::vector<double> h_points, std::vector<double> values, Eigen::MatrixXd pmf);
  const FeatureSpace& space() const override { return space_; }
  double log_density(std::span<const double> a, double h) const override;
  void sample(double h, RandomStream& rng, std::span<double> out) const override;
  std::shared_ptr<const Sensor> clone() const override;
  const Eigen::MatrixXd& pmf() const { return pmf_; }

 private:
  std::size_t class_index(double h) const;
  std::size_t value_index(double a) const;

  FeatureSpace space_;
  std::vector<double> h_points_;
  std::vector<double> values_;
  Eigen::MatrixXd pmf_;
  Eigen::MatrixXd log_pmf_;
  std::vector<std::vector<double>> row_cumulative_;
};

}  // namespace bayesfuse
