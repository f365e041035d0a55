#include "bayesfuse/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bayesfuse/errors.hpp"
#include "bayesfuse/quadrature.hpp"

namespace bayesfuse {
namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kTabulatedTol = 1e-6;

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

void Prior::finalize_nodes(std::vector<double> nodes, std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  log_weights_.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] /= total;
    log_weights_[i] = weights[i] > 0.0 ? std::log(weights[i])
                                       : -std::numeric_limits<double>::infinity();
  }
  nodes_ = std::move(nodes);
  weights_ = std::move(weights);
}

Prior Prior::discrete(const ObjectSpace& over, std::vector<double> weights) {
  if (!over.discrete()) throw InputError("prior: discrete weights require a discrete object space");
  if (weights.size() != over.point_list().size()) {
    throw InputError("prior: weight count must match the object point count");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("prior: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw InputError("prior: weights must sum to 1 (got " + std::to_string(total) + ")");
  }
  Prior p;
  p.form_ = Form::Discrete;
  p.space_ = over;
  std::vector<double> nodes = over.point_list();
  p.cumulative_.resize(weights.size());
  std::partial_sum(weights.begin(), weights.end(), p.cumulative_.begin());
  p.finalize_nodes(std::move(nodes), std::move(weights));
  return p;
}

Prior Prior::standard_normal(const ObjectSpace& over) {
  if (over.discrete()) throw InputError("prior: standard normal requires a continuous object space");
  Prior p;
  p.form_ = Form::StdNormal;
  p.space_ = over;
  if (!over.bounded()) {
    if (std::isfinite(over.min()) || std::isfinite(over.max())) {
      throw UnsupportedConfigError(
          "prior: standard normal is supported on the full real line or a bounded interval");
    }
    QuadratureRule rule = gauss_hermite_prob(kHermiteNodes);
    p.trunc_mass_ = 1.0;
    p.finalize_nodes(std::move(rule.nodes), std::move(rule.weights));
  } else {
    QuadratureRule rule = gauss_legendre_on(kLegendreNodes, over.min(), over.max());
    p.trunc_mass_ = Phi(over.max()) - Phi(over.min());
    std::vector<double> w(rule.weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rule.weights[i] * phi(rule.nodes[i]);
    p.finalize_nodes(std::move(rule.nodes), std::move(w));
  }
  return p;
}

Prior Prior::exponential(const ObjectSpace& over, double rate) {
  if (over.discrete() || over.min() != 0.0 || std::isfinite(over.max())) {
    throw UnsupportedConfigError("prior: exponential form requires the object space [0, inf)");
  }
  if (!(rate > 0.0)) throw InputError("prior: exponential rate must be positive");
  Prior p;
  p.form_ = Form::Exponential;
  p.space_ = over;
  p.rate_ = rate;
  QuadratureRule rule = gauss_laguerre(kLaguerreNodes);
  p.laguerre_x_ = rule.nodes;
  p.laguerre_log_w_.resize(rule.weights.size());
  for (std::size_t i = 0; i < rule.weights.size(); ++i) {
    p.laguerre_log_w_[i] = std::log(rule.weights[i]);
  }
  for (double& x : rule.nodes) x /= rate;
  p.finalize_nodes(std::move(rule.nodes), std::move(rule.weights));
  return p;
}

Prior Prior::tabulated(const ObjectSpace& over, std::vector<double> values, bool normalize) {
  if (over.discrete() || !over.bounded()) {
    throw InputError("prior: tabulated form requires a bounded continuous object space");
  }
  if (static_cast<int>(values.size()) != kLegendreNodes) {
    throw InputError("prior: tabulated form expects " + std::to_string(kLegendreNodes) +
                     " values (one per Gauss-Legendre node)");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("prior: tabulated values must be finite and nonnegative");
  }
  Prior p;
  p.form_ = Form::Tabulated;
  p.space_ = over;
  QuadratureRule rule = gauss_legendre_on(kLegendreNodes, over.min(), over.max());

  // Piecewise-linear density on the node grid, constant-extended to the ends.
  p.tab_x_.reserve(values.size() + 2);
  p.tab_v_.reserve(values.size() + 2);
  p.tab_x_.push_back(over.min());
  p.tab_v_.push_back(values.front());
  for (std::size_t i = 0; i < values.size(); ++i) {
    p.tab_x_.push_back(rule.nodes[i]);
    p.tab_v_.push_back(values[i]);
  }
  p.tab_x_.push_back(over.max());
  p.tab_v_.push_back(values.back());

  p.tab_cum_.assign(p.tab_x_.size(), 0.0);
  for (std::size_t i = 1; i < p.tab_x_.size(); ++i) {
    const double seg = 0.5 * (p.tab_v_[i - 1] + p.tab_v_[i]) * (p.tab_x_[i] - p.tab_x_[i - 1]);
    p.tab_cum_[i] = p.tab_cum_[i - 1] + seg;
  }
  p.tab_total_ = p.tab_cum_.back();
  if (!(p.tab_total_ > 0.0)) throw InputError("prior: tabulated density has zero mass");
  if (!normalize && std::abs(p.tab_total_ - 1.0) > kTabulatedTol) {
    throw InputError("prior: tabulated density integrates to " + std::to_string(p.tab_total_) +
                     ", not 1; pass normalize to rescale");
  }

  std::vector<double> w(values.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rule.weights[i] * values[i];
  p.finalize_nodes(std::move(rule.nodes), std::move(w));
  return p;
}

double Prior::density(double h) const {
  switch (form_) {
    case Form::Discrete:
      throw InputError("prior: density() is defined for continuous forms; use discrete_weight()");
    case Form::StdNormal:
      return space_.contains(h) ? phi(h) / trunc_mass_ : 0.0;
    case Form::Exponential:
      return h >= 0.0 ? rate_ * std::exp(-rate_ * h) : 0.0;
    case Form::Tabulated: {
      if (!space_.contains(h)) return 0.0;
      const auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), h);
      const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - tab_x_.begin(), 1),
                                                  tab_x_.size() - 1);
      const double t = (h - tab_x_[i - 1]) / (tab_x_[i] - tab_x_[i - 1]);
      return (tab_v_[i - 1] + t * (tab_v_[i] - tab_v_[i - 1])) / tab_total_;
    }
  }
  return 0.0;
}

double Prior::discrete_weight(double h) const {
  if (form_ != Form::Discrete) throw InputError("prior: discrete_weight() requires a discrete prior");
  const auto& pts = space_.point_list();
  const auto it = std::lower_bound(pts.begin(), pts.end(), h);
  if (it == pts.end() || *it != h) throw InputError("prior: value is not an object point");
  return weights_[static_cast<std::size_t>(it - pts.begin())];
}

double Prior::mass(double a, double b) const {
  if (!(a < b)) return 0.0;
  switch (form_) {
    case Form::Discrete: {
      double total = 0.0;
      const auto& pts = space_.point_list();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] > a && pts[i] <= b) total += weights_[i];
      }
      return total;
    }
    case Form::StdNormal: {
      const double lo = std::max(a, space_.min());
      const double hi = std::min(b, space_.max());
      if (!(lo < hi)) return 0.0;
      return (Phi(hi) - Phi(lo)) / trunc_mass_;
    }
    case Form::Exponential: {
      const double lo = std::max(a, 0.0);
      if (!(lo < b)) return 0.0;
      return std::exp(-rate_ * lo) - std::exp(-rate_ * b);
    }
    case Form::Tabulated: {
      auto cum_at = [this](double x) {
        if (x <= tab_x_.front()) return 0.0;
        if (x >= tab_x_.back()) return tab_total_;
        const auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - tab_x_.begin());
        const double x0 = tab_x_[i - 1], x1 = tab_x_[i];
        const double v0 = tab_v_[i - 1], v1 = tab_v_[i];
        const double t = (x - x0) / (x1 - x0);
        return tab_cum_[i - 1] + (x1 - x0) * (v0 * t + 0.5 * (v1 - v0) * t * t);
      };
      return (cum_at(b) - cum_at(a)) / tab_total_;
    }
  }
  return 0.0;
}

double Prior::sample(RandomStream& rng) const {
  switch (form_) {
    case Form::Discrete: {
      const std::size_t i = rng.categorical(cumulative_);
      return space_.point_list()[i];
    }
    case Form::StdNormal: {
      if (!space_.bounded()) return rng.normal();
      // Rejection against the untruncated normal; exact for the restriction.
      for (;;) {
        const double h = rng.normal();
        if (space_.bounds().contains(h)) return h;
      }
    }
    case Form::Exponential:
      return rng.exponential(rate_);
    case Form::Tabulated: {
      const double u = rng.uniform01() * tab_total_;
      const auto it = std::upper_bound(tab_cum_.begin(), tab_cum_.end(), u);
      const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - tab_cum_.begin(), 1),
                                                  tab_x_.size() - 1);
      const double x0 = tab_x_[i - 1], x1 = tab_x_[i];
      const double v0 = tab_v_[i - 1], v1 = tab_v_[i];
      const double want = u - tab_cum_[i - 1];
      const double len = x1 - x0;
      // Solve len*(v0 t + (v1-v0) t^2/2) = want for t in [0, 1].
      double t;
      const double slope = v1 - v0;
      if (std::abs(slope) < 1e-14 * std::max(v0, v1)) {
        t = v0 > 0.0 ? want / (len * v0) : 0.5;
      } else {
        const double disc = v0 * v0 + 2.0 * slope * want / len;
        t = (std::sqrt(std::max(disc, 0.0)) - v0) / slope;
      }
      return x0 + std::clamp(t, 0.0, 1.0) * len;
    }
  }
  return 0.0;
}

PriorDraw sample_proposal(const Prior& prior, ProposalMode mode, RandomStream& rng,
                          const std::optional<Interval>& uniform_range) {
  if (mode == ProposalMode::Prior) {
    return {prior.sample(rng), 1.0};
  }
  const ObjectSpace& space = prior.space();
  if (space.discrete()) {
    const auto& pts = space.point_list();
    const std::size_t n = pts.size();
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform01() * n), n - 1);
    const double h = pts[i];
    return {h, prior.discrete_weights()[i] * static_cast<double>(n)};
  }
  Interval range = space.bounds();
  if (uniform_range) {
    if (!(uniform_range->lo < uniform_range->hi) || !uniform_range->bounded()) {
      throw InputError("uniform proposal: range must be a bounded interval with lo < hi");
    }
    if (uniform_range->lo < space.min() || uniform_range->hi > space.max()) {
      throw InputError("uniform proposal: range must lie inside the object space");
    }
    range = *uniform_range;
  } else if (!range.bounded()) {
    throw UnsupportedConfigError(
        "uniform proposal on an unbounded object space requires an explicit bounded range");
  }
  const double h = rng.uniform_open(range.lo, range.hi);
  return {h, prior.density(h) * range.length()};
}

}  // namespace bayesfuse
