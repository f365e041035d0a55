#include "bayesfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bayesfuse/errors.hpp"

namespace bayesfuse {
namespace {

double nearest_in_points(const std::vector<double>& pts, double x) {
  const auto it = std::lower_bound(pts.begin(), pts.end(), x);
  if (it == pts.begin()) return pts.front();
  if (it == pts.end()) return pts.back();
  const double right = *it;
  const double left = *(it - 1);
  // Ties break toward the smaller point.
  return (x - left <= right - x) ? left : right;
}

std::string describe_features(std::span<const double> a) {
  std::ostringstream os;
  os << "(";
  const std::size_t shown = std::min<std::size_t>(a.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) os << ", ";
    os << a[i];
  }
  if (a.size() > shown) os << ", ...";
  os << ")";
  return os.str();
}

}  // namespace

double quantize(const DecisionSpace& space, double x) {
  switch (space.kind()) {
    case DecisionSpace::Kind::IntervalK: {
      const Interval& iv = space.hull();
      return std::clamp(x, iv.lo, iv.hi);
    }
    case DecisionSpace::Kind::PointsK:
      return nearest_in_points(space.point_list(), x);
    case DecisionSpace::Kind::UnionK: {
      double best = space.parts().front().lo;
      double best_d = std::numeric_limits<double>::infinity();
      for (const Interval& part : space.parts()) {
        const double cand = std::clamp(x, part.lo, part.hi);
        const double d = std::abs(x - cand);
        if (d < best_d) {  // parts scan in ascending order: ties keep the smaller
          best_d = d;
          best = cand;
        }
      }
      return best;
    }
  }
  return x;
}

int quantize_index(const DecisionSpace& space, double x) {
  if (!space.discrete()) throw InputError("quantize_index: decision space is not discrete");
  const double q = nearest_in_points(space.point_list(), x);
  const auto& pts = space.point_list();
  return static_cast<int>(std::lower_bound(pts.begin(), pts.end(), q) - pts.begin());
}

double posterior_mean(const Scenario& scenario, std::span<const double> a) {
  if (static_cast<int>(a.size()) != scenario.total_dims()) {
    throw InputError("posterior_mean: feature vector has wrong dimension");
  }
  for (int m = 0; m < scenario.sensor_count(); ++m) {
    if (!scenario.sensor(m).space().contains(scenario.block(a, m))) {
      throw InputError("posterior_mean: feature block " + std::to_string(m) +
                       " lies outside the sensor's feature space: " +
                       describe_features(scenario.block(a, m)));
    }
  }

  const Prior& prior = scenario.prior();
  std::span<const double> nodes(prior.nodes());
  std::span<const double> log_w(prior.log_node_weights());

  // Conjugate node rescaling: a fixed rule on the prior cannot resolve a
  // likelihood that concentrates much more sharply than the prior, so when
  // every sensor reports its h-decay the nodes follow the posterior instead.
  thread_local std::vector<double> scaled_nodes, scaled_log_w;
  if (prior.form() == Prior::Form::StdNormal && !prior.space().bounded()) {
    // Gaussian-in-h likelihoods: recenter/rescale the Hermite nodes onto the
    // conjugate posterior N(b/P, 1/P), P = 1 + total precision.
    double precision = 0.0, linear = 0.0;
    bool all_known = true;
    for (int m = 0; m < scenario.sensor_count(); ++m) {
      const auto d = scenario.sensor(m).h_gaussian_decay(scenario.block(a, m));
      if (!d) {
        all_known = false;
        break;
      }
      precision += d->precision;
      linear += d->linear;
    }
    if (all_known) {
      const double post_precision = 1.0 + precision;
      const double center = linear / post_precision;
      const double scale = 1.0 / std::sqrt(post_precision);
      const std::size_t n = nodes.size();
      scaled_nodes.resize(n);
      scaled_log_w.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double hi = center + nodes[i] * scale;
        scaled_nodes[i] = hi;
        // Restore the likelihood factors absorbed into the node placement;
        // constants cancel in the posterior quotient.
        scaled_log_w[i] = log_w[i] + 0.5 * precision * hi * hi - linear * hi;
      }
      nodes = scaled_nodes;
      log_w = scaled_log_w;
    }
  } else if (prior.form() == Prior::Form::Exponential) {
    double decay = 0.0;
    bool all_known = true;
    for (int m = 0; m < scenario.sensor_count(); ++m) {
      const auto r = scenario.sensor(m).h_exponential_decay(scenario.block(a, m));
      if (!r) {
        all_known = false;
        break;
      }
      decay += *r;
    }
    if (all_known && decay > 0.0) {
      const double lambda = prior.exponential_rate();
      const double total = lambda + decay;
      const std::vector<double>& x = prior.laguerre_x();
      const std::vector<double>& log_raw_w = prior.laguerre_log_w();
      scaled_nodes.resize(x.size());
      scaled_log_w.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double hi = x[i] / total;
        scaled_nodes[i] = hi;
        // node weight x prior density, with the e^{-total h} factor restored
        // (constants drop out of the posterior quotient).
        scaled_log_w[i] = log_raw_w[i] + x[i] - lambda * hi;
      }
      nodes = scaled_nodes;
      log_w = scaled_log_w;
    }
  }
  const std::size_t n = nodes.size();

  // Sensor contributions are accumulated separately from the prior term; the
  // prior weight is added once at the end.
  thread_local std::vector<double> acc;
  acc.assign(n, 0.0);
  for (int m = 0; m < scenario.sensor_count(); ++m) {
    scenario.sensor(m).accumulate_log_density(scenario.block(a, m), nodes,
                                              std::span<double>(acc));
  }

  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] += log_w[i];
    if (acc[i] > peak) peak = acc[i];
  }
  if (!std::isfinite(peak)) {
    throw DegeneracyError("posterior_mean: zero posterior mass at a = " + describe_features(a),
                          std::vector<double>(a.begin(), a.end()));
  }

  double den = 0.0, num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(acc[i] - peak);
    den += e;
    num += nodes[i] * e;
  }
  if (!(den >= 1e-300)) {
    throw DegeneracyError("posterior_mean: denominator degenerated at a = " + describe_features(a),
                          std::vector<double>(a.begin(), a.end()));
  }
  return num / den;
}

FusionRule::FusionRule(std::shared_ptr<const Scenario> scenario)
    : scenario_(std::move(scenario)) {
  if (!scenario_) throw InputError("fusion rule: null scenario");
}

double FusionRule::soft(std::span<const double> a) const { return posterior_mean(*scenario_, a); }

double FusionRule::fuse(std::span<const double> a) const {
  return quantize(scenario_->decision(), soft(a));
}

}  // namespace bayesfuse
