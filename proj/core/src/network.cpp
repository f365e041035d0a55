#include "bayesfuse/network.hpp"

#include <algorithm>
#include <cmath>

#include "bayesfuse/errors.hpp"

namespace bayesfuse::net {
namespace {

double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct Stage1 {
  enum class Kind { PassThrough, LinearCombine, Quantized };
  Kind kind = Kind::PassThrough;
  std::vector<double> coeffs;               // LinearCombine, one per group feature
  std::shared_ptr<const FusionRule> rule;   // Quantized
  DecisionSpace kstar = DecisionSpace::interval(0.0, 1.0);
};

class ComposedRule : public Rule {
 public:
  ComposedRule(std::shared_ptr<const Scenario> original, std::vector<std::vector<int>> groups,
               std::vector<Stage1> stages, std::shared_ptr<const Scenario> derived)
      : original_(std::move(original)),
        groups_(std::move(groups)),
        stages_(std::move(stages)),
        derived_(std::move(derived)),
        stage2_(derived_) {}

  double soft(std::span<const double> a) const override {
    thread_local std::vector<double> z;
    reduce(a, z);
    return stage2_.soft(z);
  }

  double fuse(std::span<const double> a) const override {
    thread_local std::vector<double> z;
    reduce(a, z);
    return stage2_.fuse(z);
  }

  const Scenario& scenario() const override { return *original_; }
  std::shared_ptr<const Scenario> derived() const { return derived_; }

 private:
  void reduce(std::span<const double> a, std::vector<double>& z) const {
    z.resize(groups_.size());
    thread_local std::vector<double> group_features;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const Stage1& stage = stages_[g];
      switch (stage.kind) {
        case Stage1::Kind::PassThrough: {
          const int m = groups_[g][0];
          z[g] = original_->block(a, m)[0];
          break;
        }
        case Stage1::Kind::LinearCombine: {
          double acc = 0.0;
          std::size_t j = 0;
          for (int m : groups_[g]) {
            for (double x : original_->block(a, m)) acc += stage.coeffs[j++] * x;
          }
          z[g] = acc;
          break;
        }
        case Stage1::Kind::Quantized: {
          group_features.clear();
          for (int m : groups_[g]) {
            const auto block = original_->block(a, m);
            group_features.insert(group_features.end(), block.begin(), block.end());
          }
          z[g] = stage.rule->fuse(group_features);
          break;
        }
      }
    }
  }

  std::shared_ptr<const Scenario> original_;
  std::vector<std::vector<int>> groups_;
  std::vector<Stage1> stages_;
  std::shared_ptr<const Scenario> derived_;
  FusionRule stage2_;
};

void check_partition(const Scenario& scenario, const std::vector<std::vector<int>>& groups) {
  std::vector<int> seen(scenario.sensor_count(), 0);
  if (groups.empty()) throw InputError("topology: PBPO requires at least one group");
  for (const auto& g : groups) {
    if (g.empty()) throw InputError("topology: groups must be non-empty");
    for (int m : g) {
      if (m < 0 || m >= scenario.sensor_count()) {
        throw InputError("topology: sensor index " + std::to_string(m) + " out of range");
      }
      if (seen[m]++) throw InputError("topology: sensor " + std::to_string(m) + " appears twice");
    }
  }
  for (int m = 0; m < scenario.sensor_count(); ++m) {
    if (!seen[m]) throw InputError("topology: groups must partition all sensors");
  }
}

// Exact conditional pmf of the quantized stage-1 output of a 1-D Gaussian
// group: decision regions located by scan + bisection, mass by normal CDF.
Eigen::MatrixXd tabulate_quantized_pmf(const FusionRule& group_rule, const GaussianSensor& sensor,
                                       const std::vector<double>& h_points,
                                       const DecisionSpace& kstar) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double max_sd = 0.0;
  for (double h : h_points) {
    double mu, var;
    sensor.scalar_class_params(h, &mu, &var);
    lo = std::min(lo, mu);
    hi = std::max(hi, mu);
    max_sd = std::max(max_sd, std::sqrt(var));
  }
  lo -= 12.0 * max_sd;
  hi += 12.0 * max_sd;

  const int scan_points = 16385;
  const auto decision_at = [&](double x) {
    const double a[1] = {x};
    return quantize_index(kstar, group_rule.soft(a));
  };

  std::vector<double> edges;    // interior region boundaries
  std::vector<int> decisions;   // region decisions, size edges.size() + 1
  int prev = decision_at(lo);
  decisions.push_back(prev);
  for (int i = 1; i < scan_points; ++i) {
    const double x = lo + (hi - lo) * i / (scan_points - 1);
    const int d = decision_at(x);
    if (d != prev) {
      double a = lo + (hi - lo) * (i - 1) / (scan_points - 1);
      double b = x;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        if (decision_at(mid) == prev) {
          a = mid;
        } else {
          b = mid;
        }
      }
      edges.push_back(0.5 * (a + b));
      decisions.push_back(d);
      prev = d;
    }
  }

  const int n_values = static_cast<int>(kstar.point_list().size());
  Eigen::MatrixXd pmf = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h_points.size()), n_values);
  for (std::size_t i = 0; i < h_points.size(); ++i) {
    double mu, var;
    sensor.scalar_class_params(h_points[i], &mu, &var);
    const double sd = std::sqrt(var);
    double cdf_prev = 0.0;
    for (std::size_t r = 0; r < decisions.size(); ++r) {
      const double cdf_next = r < edges.size() ? Phi((edges[r] - mu) / sd) : 1.0;
      pmf(static_cast<Eigen::Index>(i), decisions[r]) += cdf_next - cdf_prev;
      cdf_prev = cdf_next;
    }
  }
  return pmf;
}

}  // namespace

std::shared_ptr<const Rule> build_pbpo(std::shared_ptr<const Scenario> scenario,
                                       const FusionTopology& topology) {
  if (!scenario) throw InputError("build_pbpo: null scenario");
  if (topology.kind == FusionTopology::Kind::Centralized) {
    return std::make_shared<FusionRule>(scenario);
  }
  if (!topology.inner_decision) {
    throw InputError("topology: PBPO requires an inner decision space");
  }
  check_partition(*scenario, topology.groups);
  const DecisionSpace& kstar = *topology.inner_decision;

  std::vector<Stage1> stages;
  std::vector<std::shared_ptr<const Sensor>> derived;
  bool all_linear_gauss = true;

  for (const auto& group : topology.groups) {
    Stage1 stage;
    if (kstar.discrete()) {
      if (!scenario->object().discrete()) {
        throw UnsupportedConfigError(
            "build_pbpo: a discrete inner decision space requires a discrete object space "
            "(tabulating stage-2 densities over a continuum is not supported)");
      }
      if (group.size() != 1 || scenario->sensor(group[0]).dims() != 1) {
        throw UnsupportedConfigError(
            "build_pbpo: discrete inner decisions are tabulated only for single-sensor groups "
            "with one feature");
      }
      const auto* gauss = dynamic_cast<const GaussianSensor*>(&scenario->sensor(group[0]));
      double mu, var;
      if (!gauss || !gauss->scalar_class_params(scenario->object().point_list().front(), &mu, &var)) {
        throw UnsupportedConfigError(
            "build_pbpo: stage-2 density tabulation is implemented for 1-D Gaussian sensors; "
            "got an unsupported family");
      }
      auto sub = std::make_shared<Scenario>(
          scenario->object(), scenario->prior(),
          std::vector<std::shared_ptr<const Sensor>>{scenario->sensor_ptr(group[0])}, kstar,
          scenario->cost());
      stage.kind = Stage1::Kind::Quantized;
      stage.rule = std::make_shared<FusionRule>(sub);
      stage.kstar = kstar;
      Eigen::MatrixXd pmf =
          tabulate_quantized_pmf(*stage.rule, *gauss, scenario->object().point_list(), kstar);
      derived.push_back(std::make_shared<DiscreteSensor>(scenario->object().point_list(),
                                                         kstar.point_list(), pmf));
      all_linear_gauss = false;
      stages.push_back(std::move(stage));
      continue;
    }

    // Continuous K*.
    const bool kstar_unbounded = !std::isfinite(kstar.hull().lo) && !std::isfinite(kstar.hull().hi);
    bool linear_gauss = scenario->prior().form() == Prior::Form::StdNormal &&
                        !scenario->object().discrete() && !scenario->object().bounded() &&
                        kstar_unbounded;
    double precision = 0.0;  // T = sum dims u^2 / v
    if (linear_gauss) {
      for (int m : group) {
        const auto* gauss = dynamic_cast<const GaussianSensor*>(&scenario->sensor(m));
        if (!gauss || !gauss->is_linear_spherical()) {
          linear_gauss = false;
          break;
        }
        const double u = gauss->mean_slope();
        precision += gauss->dims() * u * u / gauss->spherical_variance();
      }
    }
    if (linear_gauss) {
      stage.kind = Stage1::Kind::LinearCombine;
      for (int m : group) {
        const auto* gauss = static_cast<const GaussianSensor*>(&scenario->sensor(m));
        const double c = gauss->mean_slope() / gauss->spherical_variance() / (1.0 + precision);
        stage.coeffs.insert(stage.coeffs.end(), gauss->dims(), c);
      }
      const double slope = precision / (1.0 + precision);
      const double variance = precision / ((1.0 + precision) * (1.0 + precision));
      derived.push_back(GaussianSensor::linear(1, slope, variance));
      stages.push_back(std::move(stage));
      continue;
    }
    if (group.size() == 1 && scenario->sensor(group[0]).dims() == 1) {
      const FeatureSpace& fs = scenario->sensor(group[0]).space();
      if (kstar.hull().lo <= fs.bounds().lo && kstar.hull().hi >= fs.bounds().hi) {
        stage.kind = Stage1::Kind::PassThrough;
        derived.push_back(scenario->sensor_ptr(group[0]));
        all_linear_gauss = false;
        stages.push_back(std::move(stage));
        continue;
      }
      throw UnsupportedConfigError(
          "build_pbpo: a continuous inner decision space must cover the group's feature space "
          "for pass-through composition");
    }
    throw UnsupportedConfigError(
        "build_pbpo: continuous inner decisions are supported for Gaussian linear groups "
        "(standard-normal prior, unbounded K*) or single 1-D sensor groups; got neither");
  }

  auto derived_scenario = std::make_shared<Scenario>(
      scenario->object(), scenario->prior(), std::move(derived), scenario->decision(),
      scenario->cost(), scenario->even_cost_optimal() && all_linear_gauss);
  return std::make_shared<ComposedRule>(scenario, topology.groups, std::move(stages),
                                        derived_scenario);
}

std::shared_ptr<const Scenario> stage2_scenario(const Rule& rule) {
  if (const auto* composed = dynamic_cast<const ComposedRule*>(&rule)) {
    return composed->derived();
  }
  return nullptr;
}

}  // namespace bayesfuse::net
