#include "bayesfuse/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bayesfuse/errors.hpp"

namespace bayesfuse {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kMixWeightTol = 1e-12;

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Sum and sum-of-squares accumulated in ascending value order, so any
// permutation of the input yields bit-identical statistics.
void sorted_sums(std::span<const double> a, double* s1, double* s2) {
  thread_local std::vector<double> buf;
  buf.assign(a.begin(), a.end());
  std::sort(buf.begin(), buf.end());
  double t1 = 0.0, t2 = 0.0;
  for (double x : buf) {
    t1 += x;
    t2 += x * x;
  }
  *s1 = t1;
  *s2 = t2;
}

std::size_t lookup_exact(const std::vector<double>& pts, double h, const char* what) {
  const auto it = std::lower_bound(pts.begin(), pts.end(), h);
  if (it == pts.end() || *it != h) {
    throw InputError(std::string(what) + ": h = " + std::to_string(h) +
                     " is not one of the tabulated object points");
  }
  return static_cast<std::size_t>(it - pts.begin());
}

}  // namespace

void Sensor::accumulate_log_density(std::span<const double> a, std::span<const double> nodes,
                                    std::span<double> acc) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) acc[i] += log_density(a, nodes[i]);
}

// ---------------------------------------------------------------------------
// GaussianSensor

std::shared_ptr<const GaussianSensor> GaussianSensor::linear(int dims, double mean_slope,
                                                             double variance) {
  if (!(variance > 0.0)) throw InputError("gaussian sensor: variance must be positive");
  auto s = std::shared_ptr<GaussianSensor>(new GaussianSensor());
  s->space_ = FeatureSpace::real_line(dims);
  s->linear_ = LinearMean{mean_slope};
  s->spherical_ = SphericalCov{variance};
  return s;
}

std::shared_ptr<const GaussianSensor> GaussianSensor::linear_factor(int dims, double mean_slope,
                                                                    Eigen::MatrixXd lower_factor) {
  if (lower_factor.rows() != dims || lower_factor.cols() != dims) {
    throw InputError("gaussian sensor: factor must be dims x dims");
  }
  for (int i = 0; i < dims; ++i) {
    if (!(lower_factor(i, i) > 0.0)) {
      throw InputError("gaussian sensor: factor diagonal must be strictly positive");
    }
    for (int j = i + 1; j < dims; ++j) {
      if (lower_factor(i, j) != 0.0) {
        throw InputError("gaussian sensor: factor must be lower triangular");
      }
    }
  }
  auto s = std::shared_ptr<GaussianSensor>(new GaussianSensor());
  s->space_ = FeatureSpace::real_line(dims);
  s->linear_ = LinearMean{mean_slope};
  s->factor_ = FactorCov{std::move(lower_factor)};
  const Eigen::MatrixXd& L = s->factor_->factor;
  s->log_det_half_ = 0.0;
  for (int i = 0; i < dims; ++i) s->log_det_half_ += std::log(L(i, i));
  s->ones_solved_ = L.triangularView<Eigen::Lower>().solve(Eigen::VectorXd::Ones(dims));
  s->ones_norm2_ = s->ones_solved_.squaredNorm();
  return s;
}

std::shared_ptr<const GaussianSensor> GaussianSensor::linear_covariance(
    int dims, double mean_slope, const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw InputError("gaussian sensor: covariance matrix is not positive definite");
  }
  return linear_factor(dims, mean_slope, llt.matrixL());
}

std::shared_ptr<const GaussianSensor> GaussianSensor::tabulated(std::vector<double> h_points,
                                                                std::vector<double> means,
                                                                std::vector<double> variances) {
  if (h_points.size() != means.size() || h_points.size() != variances.size() || h_points.empty()) {
    throw InputError("gaussian sensor: tabulated points/means/variances must have equal size");
  }
  for (std::size_t i = 1; i < h_points.size(); ++i) {
    if (!(h_points[i] > h_points[i - 1])) {
      throw InputError("gaussian sensor: tabulated h points must be strictly sorted");
    }
  }
  for (double v : variances) {
    if (!(v > 0.0)) throw InputError("gaussian sensor: variances must be positive");
  }
  auto s = std::shared_ptr<GaussianSensor>(new GaussianSensor());
  s->space_ = FeatureSpace::real_line(1);
  TabulatedMean tm;
  tm.h_points = h_points;
  for (double m : means) tm.means.push_back(Eigen::VectorXd::Constant(1, m));
  s->tab_mean_ = std::move(tm);
  s->tab_cov_ = TabulatedCov{std::move(h_points), std::move(variances)};
  return s;
}

std::size_t GaussianSensor::class_index(double h) const {
  const auto& pts = tab_mean_ ? tab_mean_->h_points : tab_cov_->h_points;
  return lookup_exact(pts, h, "gaussian sensor");
}

double GaussianSensor::mean_slope() const {
  if (!linear_) throw InputError("gaussian sensor: not a linear-mean sensor");
  return linear_->slope;
}

double GaussianSensor::spherical_variance() const {
  if (!spherical_) throw InputError("gaussian sensor: not a spherical-covariance sensor");
  return spherical_->variance;
}

bool GaussianSensor::scalar_class_params(double h, double* mean, double* variance) const {
  if (dims() != 1) return false;
  if (linear_) {
    *mean = linear_->slope * h;
  } else {
    *mean = tab_mean_->means[class_index(h)](0);
  }
  if (spherical_) {
    *variance = spherical_->variance;
  } else if (tab_cov_) {
    *variance = tab_cov_->variances[class_index(h)];
  } else {
    *variance = factor_->factor(0, 0) * factor_->factor(0, 0);
  }
  return true;
}

double GaussianSensor::log_density(std::span<const double> a, double h) const {
  const int n = dims();
  if (factor_) {
    Eigen::VectorXd r(n);
    const double u = linear_->slope;
    for (int i = 0; i < n; ++i) r(i) = a[i] - u * h;
    factor_->factor.triangularView<Eigen::Lower>().solveInPlace(r);
    return -0.5 * n * kLog2Pi - log_det_half_ - 0.5 * r.squaredNorm();
  }
  if (linear_ && spherical_) {
    double s1, s2;
    sorted_sums(a, &s1, &s2);
    const double u = linear_->slope, v = spherical_->variance;
    const double q = s2 - 2.0 * u * h * s1 + n * u * u * h * h;
    return -0.5 * n * (kLog2Pi + std::log(v)) - 0.5 * q / v;
  }
  const std::size_t c = class_index(h);
  const Eigen::VectorXd& mu =
      tab_mean_ ? tab_mean_->means[c] : Eigen::VectorXd::Constant(n, linear_->slope * h).eval();
  const double v = tab_cov_ ? tab_cov_->variances[c] : spherical_->variance;
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - mu(i);
    q += d * d;
  }
  return -0.5 * n * (kLog2Pi + std::log(v)) - 0.5 * q / v;
}

void GaussianSensor::accumulate_log_density(std::span<const double> a,
                                            std::span<const double> nodes,
                                            std::span<double> acc) const {
  const int n = dims();
  if (linear_ && spherical_) {
    double s1, s2;
    sorted_sums(a, &s1, &s2);
    const double u = linear_->slope, v = spherical_->variance;
    const double c0 = -0.5 * n * (kLog2Pi + std::log(v));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double h = nodes[i];
      acc[i] += c0 - 0.5 * (s2 - 2.0 * u * h * s1 + n * u * u * h * h) / v;
    }
    return;
  }
  if (factor_) {
    Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(a.data(), n);
    factor_->factor.triangularView<Eigen::Lower>().solveInPlace(y0);
    const double u = linear_->slope;
    const double y00 = y0.squaredNorm();
    const double y01 = y0.dot(ones_solved_);
    const double c0 = -0.5 * n * kLog2Pi - log_det_half_;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double uh = u * nodes[i];
      acc[i] += c0 - 0.5 * (y00 - 2.0 * uh * y01 + uh * uh * ones_norm2_);
    }
    return;
  }
  Sensor::accumulate_log_density(a, nodes, acc);
}

void GaussianSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  const int n = dims();
  if (factor_) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.normal();
    const Eigen::VectorXd colored = factor_->factor.triangularView<Eigen::Lower>() * g;
    const double u = linear_->slope;
    for (int i = 0; i < n; ++i) out[i] = u * h + colored(i);
    return;
  }
  if (linear_ && spherical_) {
    const double sd = std::sqrt(spherical_->variance);
    const double mu = linear_->slope * h;
    for (int i = 0; i < n; ++i) out[i] = mu + sd * rng.normal();
    return;
  }
  const std::size_t c = class_index(h);
  const Eigen::VectorXd& mu =
      tab_mean_ ? tab_mean_->means[c] : Eigen::VectorXd::Constant(n, linear_->slope * h).eval();
  const double sd = std::sqrt(tab_cov_ ? tab_cov_->variances[c] : spherical_->variance);
  for (int i = 0; i < n; ++i) out[i] = mu(i) + sd * rng.normal();
}

std::optional<Sensor::GaussianHDecay> GaussianSensor::h_gaussian_decay(
    std::span<const double> a) const {
  if (linear_ && spherical_) {
    double s1, s2;
    sorted_sums(a, &s1, &s2);
    const double u = linear_->slope, v = spherical_->variance;
    return GaussianHDecay{dims() * u * u / v, u * s1 / v};
  }
  if (linear_ && factor_) {
    Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(a.data(), dims());
    factor_->factor.triangularView<Eigen::Lower>().solveInPlace(y0);
    const double u = linear_->slope;
    return GaussianHDecay{u * u * ones_norm2_, u * y0.dot(ones_solved_)};
  }
  return std::nullopt;
}

std::shared_ptr<const Sensor> GaussianSensor::clone() const {
  return std::shared_ptr<const Sensor>(new GaussianSensor(*this));
}

// ---------------------------------------------------------------------------
// ExponentialSensor

ExponentialSensor::ExponentialSensor(int dims) : space_(FeatureSpace::half_line(dims)) {}

void ExponentialSensor::check_h(double h) const {
  if (!(h > 0.0)) throw InputError("exponential sensor: rate h must be positive");
}

double ExponentialSensor::log_density(std::span<const double> a, double h) const {
  check_h(h);
  double s1, s2;
  sorted_sums(a, &s1, &s2);
  return dims() * std::log(h) - h * s1;
}

void ExponentialSensor::accumulate_log_density(std::span<const double> a,
                                               std::span<const double> nodes,
                                               std::span<double> acc) const {
  double s1, s2;
  sorted_sums(a, &s1, &s2);
  const int n = dims();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double h = nodes[i];
    acc[i] += h > 0.0 ? n * std::log(h) - h * s1 : -std::numeric_limits<double>::infinity();
  }
}

void ExponentialSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  check_h(h);
  for (int i = 0; i < dims(); ++i) out[i] = rng.exponential(h);
}

std::optional<double> ExponentialSensor::h_exponential_decay(std::span<const double> a) const {
  double s1, s2;
  sorted_sums(a, &s1, &s2);
  return s1;
}

std::shared_ptr<const Sensor> ExponentialSensor::clone() const {
  return std::make_shared<ExponentialSensor>(dims());
}

// ---------------------------------------------------------------------------
// PoissonSensor

PoissonSensor::PoissonSensor(int dims) : space_(FeatureSpace::counts(dims)) {}

void PoissonSensor::check_h(double h) const {
  if (!(h >= 0.0)) throw InputError("poisson sensor: rate h must be nonnegative");
}

double PoissonSensor::log_density(std::span<const double> a, double h) const {
  check_h(h);
  double s1 = 0.0, lg = 0.0;
  for (double x : a) {
    s1 += x;
    lg += std::lgamma(x + 1.0);
  }
  if (h == 0.0) return s1 == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -dims() * h + s1 * std::log(h) - lg;
}

void PoissonSensor::accumulate_log_density(std::span<const double> a,
                                           std::span<const double> nodes,
                                           std::span<double> acc) const {
  double s1 = 0.0, lg = 0.0;
  {
    thread_local std::vector<double> buf;
    buf.assign(a.begin(), a.end());
    std::sort(buf.begin(), buf.end());
    for (double x : buf) {
      s1 += x;
      lg += std::lgamma(x + 1.0);
    }
  }
  const int n = dims();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double h = nodes[i];
    if (h == 0.0) {
      acc[i] += s1 == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    } else {
      acc[i] += -n * h + s1 * std::log(h) - lg;
    }
  }
}

void PoissonSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  check_h(h);
  for (int i = 0; i < dims(); ++i) out[i] = static_cast<double>(rng.poisson(h));
}

std::optional<double> PoissonSensor::h_exponential_decay(std::span<const double>) const {
  return static_cast<double>(dims());
}

std::shared_ptr<const Sensor> PoissonSensor::clone() const {
  return std::make_shared<PoissonSensor>(dims());
}

// ---------------------------------------------------------------------------
// ExpUniformSensor

ExpUniformSensor::ExpUniformSensor() : space_(FeatureSpace::half_line(1)) {}

void ExpUniformSensor::check_h(double h) const {
  if (!(h > 0.0)) throw InputError("exp-uniform sensor: h must be positive");
}

double ExpUniformSensor::log_density(std::span<const double> a, double h) const {
  check_h(h);
  const double x = a[0];
  const double log_expo = std::log(0.5 * h) - h * x;
  if (x <= h) {
    return log_sum_exp(log_expo, -std::log(2.0 * h));
  }
  return log_expo;
}

void ExpUniformSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  check_h(h);
  out[0] = rng.uniform01() < 0.5 ? rng.exponential(h) : rng.uniform_open(0.0, h);
}

std::shared_ptr<const Sensor> ExpUniformSensor::clone() const {
  return std::make_shared<ExpUniformSensor>();
}

// ---------------------------------------------------------------------------
// GaussMixSensor

GaussMixSensor::GaussMixSensor(double sharp_var, double center, double width_scale)
    : space_(FeatureSpace::real_line(1)),
      sharp_var_(sharp_var),
      center_(center),
      width_scale_(width_scale) {
  if (!(sharp_var > 0.0) || !(width_scale > 0.0)) {
    throw InputError("gauss-mix sensor: sharp_var and width_scale must be positive");
  }
}

void GaussMixSensor::check_h(double h) const {
  if (!(h > 0.0)) throw InputError("gauss-mix sensor: h must be positive");
}

double GaussMixSensor::log_density(std::span<const double> a, double h) const {
  check_h(h);
  const double x = a[0];
  const double d1 = x - h;
  const double l1 = -0.5 * (kLog2Pi + std::log(sharp_var_)) - 0.5 * d1 * d1 / sharp_var_;
  const double wide_var = (width_scale_ / h) * (width_scale_ / h);
  const double d2 = x - center_;
  const double l2 = -0.5 * (kLog2Pi + std::log(wide_var)) - 0.5 * d2 * d2 / wide_var;
  return std::log(0.5) + log_sum_exp(l1, l2);
}

void GaussMixSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  check_h(h);
  if (rng.uniform01() < 0.5) {
    out[0] = h + std::sqrt(sharp_var_) * rng.normal();
  } else {
    out[0] = center_ + (width_scale_ / h) * rng.normal();
  }
}

std::shared_ptr<const Sensor> GaussMixSensor::clone() const {
  return std::make_shared<GaussMixSensor>(sharp_var_, center_, width_scale_);
}

// ---------------------------------------------------------------------------
// MixtureSensor

MixtureSensor::MixtureSensor(std::vector<std::shared_ptr<const Sensor>> components,
                             std::vector<double> weights)
    : space_(FeatureSpace::real_line(1)) {
  if (components.empty() || components.size() != weights.size()) {
    throw InputError("mixture sensor: components and weights must be non-empty and equal-sized");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InputError("mixture sensor: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kMixWeightTol) {
    throw InputError("mixture sensor: weights must sum to 1 exactly (got " +
                     std::to_string(total) + "); no implicit renormalization");
  }
  const int d = components.front()->dims();
  const FeatureSpace::Domain dom = components.front()->space().domain();
  for (const auto& c : components) {
    if (c->dims() != d) throw InputError("mixture sensor: components must share dims");
    if (c->space().domain() != dom && dom != FeatureSpace::Domain::RealLine &&
        c->space().domain() != FeatureSpace::Domain::RealLine) {
      throw InputError("mixture sensor: components must share a compatible domain");
    }
  }
  // The mixture lives on the union of the component supports.
  space_ = (dom == components.front()->space().domain() &&
            std::all_of(components.begin(), components.end(),
                        [&](const auto& c) { return c->space().domain() == dom; }))
               ? components.front()->space()
               : FeatureSpace::real_line(d);
  components_ = std::move(components);
  weights_ = std::move(weights);
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

double MixtureSensor::log_density(std::span<const double> a, double h) const {
  double acc = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    acc = log_sum_exp(acc, std::log(weights_[k]) + components_[k]->log_density(a, h));
  }
  return acc;
}

void MixtureSensor::check_h(double h) const {
  for (const auto& c : components_) c->check_h(h);
}

void MixtureSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  const std::size_t k = rng.categorical(cumulative_);
  components_[k]->sample(h, rng, out);
}

std::shared_ptr<const Sensor> MixtureSensor::clone() const {
  return std::make_shared<MixtureSensor>(components_, weights_);
}

// ---------------------------------------------------------------------------
// DiscreteSensor

DiscreteSensor::DiscreteSensor(std::vector<double> h_points, std::vector<double> values,
                               Eigen::MatrixXd pmf)
    : space_(FeatureSpace::points(values)),
      h_points_(std::move(h_points)),
      values_(std::move(values)),
      pmf_(std::move(pmf)) {
  if (pmf_.rows() != static_cast<Eigen::Index>(h_points_.size()) ||
      pmf_.cols() != static_cast<Eigen::Index>(values_.size())) {
    throw InputError("discrete sensor: pmf must be (object points) x (feature values)");
  }
  log_pmf_ = pmf_;
  for (Eigen::Index i = 0; i < pmf_.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < pmf_.cols(); ++j) {
      const double p = pmf_(i, j);
      if (!(p >= 0.0)) throw InputError("discrete sensor: pmf entries must be nonnegative");
      row += p;
      log_pmf_(i, j) = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
    if (std::abs(row - 1.0) > 1e-9) {
      throw InputError("discrete sensor: pmf rows must sum to 1");
    }
  }
  row_cumulative_.resize(h_points_.size());
  for (std::size_t i = 0; i < h_points_.size(); ++i) {
    row_cumulative_[i].resize(values_.size());
    double c = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      c += pmf_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      row_cumulative_[i][j] = c;
    }
  }
}

std::size_t DiscreteSensor::class_index(double h) const {
  return lookup_exact(h_points_, h, "discrete sensor");
}

std::size_t DiscreteSensor::value_index(double a) const {
  // Nearest tabulated value within a small tolerance; quantized inputs match
  // exactly, file inputs may carry round-trip noise.
  const auto it = std::lower_bound(values_.begin(), values_.end(), a);
  std::size_t best = values_.size();
  double best_d = std::numeric_limits<double>::infinity();
  if (it != values_.end()) {
    best = static_cast<std::size_t>(it - values_.begin());
    best_d = std::abs(values_[best] - a);
  }
  if (it != values_.begin()) {
    const std::size_t j = static_cast<std::size_t>(it - values_.begin()) - 1;
    if (std::abs(values_[j] - a) < best_d) {
      best = j;
      best_d = std::abs(values_[j] - a);
    }
  }
  const double scale = std::max(1.0, std::abs(values_[best]));
  if (best_d > 1e-9 * scale) {
    throw InputError("discrete sensor: feature value " + std::to_string(a) +
                     " is not one of the tabulated values");
  }
  return best;
}

double DiscreteSensor::log_density(std::span<const double> a, double h) const {
  return log_pmf_(static_cast<Eigen::Index>(class_index(h)),
                  static_cast<Eigen::Index>(value_index(a[0])));
}

void DiscreteSensor::sample(double h, RandomStream& rng, std::span<double> out) const {
  const std::size_t i = class_index(h);
  out[0] = values_[rng.categorical(row_cumulative_[i])];
}

std::shared_ptr<const Sensor> DiscreteSensor::clone() const {
  return std::shared_ptr<const Sensor>(new DiscreteSensor(*this));
}

}  // namespace bayesfuse
