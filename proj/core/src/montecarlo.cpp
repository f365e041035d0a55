#include "bayesfuse/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <functional>
#include <thread>

#include "bayesfuse/errors.hpp"

namespace bayesfuse::mc {
namespace {

int clamp_threads(int threads) {
  return std::max(1, threads);
}

void run_blocked(std::size_t block_count, int threads, const std::function<void(std::size_t)>& work) {
  threads = clamp_threads(threads);
  if (threads == 1 || block_count <= 1) {
    for (std::size_t b = 0; b < block_count; ++b) work(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n = std::min<std::size_t>(threads, block_count);
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= block_count) return;
        work(b);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct BinLayout {
  bool discrete = false;
  std::vector<double> centers;
  std::vector<double> edges;  // empty when discrete
  double lo = 0.0, width = 1.0;
  int bins = 0;

  // Bin index, or -1 when out of range.
  int index(double x, const DecisionSpace* snap) const {
    if (discrete) {
      return snap ? -2 : -1;  // resolved by caller for discrete layouts
    }
    if (x < lo) return -1;
    const double hi = edges.back();
    if (x > hi) return -1;
    if (x == hi) return bins - 1;
    const int i = static_cast<int>((x - lo) / width);
    return std::min(i, bins - 1);
  }
};

BinLayout continuous_layout(const Interval& range, int bins, const char* what) {
  if (bins < 1) throw InputError(std::string(what) + ": bin count must be >= 1");
  if (!range.bounded() || !(range.lo < range.hi)) {
    throw InputError(std::string(what) + ": range must be a bounded interval");
  }
  BinLayout layout;
  layout.discrete = false;
  layout.bins = bins;
  layout.lo = range.lo;
  layout.width = range.length() / bins;
  layout.edges.resize(bins + 1);
  layout.centers.resize(bins);
  for (int i = 0; i <= bins; ++i) layout.edges[i] = range.lo + range.length() * i / bins;
  for (int i = 0; i < bins; ++i) layout.centers[i] = 0.5 * (layout.edges[i] + layout.edges[i + 1]);
  return layout;
}

BinLayout discrete_layout(const std::vector<double>& pts) {
  BinLayout layout;
  layout.discrete = true;
  layout.centers = pts;
  layout.bins = static_cast<int>(pts.size());
  return layout;
}

int nearest_point_index(const std::vector<double>& pts, double x) {
  const auto it = std::lower_bound(pts.begin(), pts.end(), x);
  if (it == pts.begin()) return 0;
  if (it == pts.end()) return static_cast<int>(pts.size()) - 1;
  const int right = static_cast<int>(it - pts.begin());
  const int left = right - 1;
  return (x - pts[left] <= pts[right] - x) ? left : right;
}

}  // namespace

SampleBatch draw_batch(const Scenario& scenario, std::size_t count, ProposalMode mode,
                       std::uint64_t seed, std::optional<Interval> uniform_range,
                       std::size_t first_sample, int threads) {
  if (count < 1) throw InputError("draw_batch: sample count must be >= 1");
  if (uniform_range && mode != ProposalMode::Uniform) {
    throw InputError("draw_batch: uniform_range requires the uniform proposal mode");
  }
  // Probe the proposal configuration once so errors surface before any work.
  {
    RandomStream probe(seed, 0);
    (void)sample_proposal(scenario.prior(), mode, probe, uniform_range);
  }

  SampleBatch batch;
  batch.feature_dim = scenario.total_dims();
  batch.seed = seed;
  batch.first_sample = first_sample;
  batch.mode = mode;
  batch.uniform_range = uniform_range;
  batch.h.resize(count);
  batch.w.resize(count);
  batch.features.resize(count * static_cast<std::size_t>(batch.feature_dim));

  const std::size_t first_block = first_sample / kSamplesPerBlock;
  const std::size_t last_block = (first_sample + count - 1) / kSamplesPerBlock;
  const std::size_t block_count = last_block - first_block + 1;

  run_blocked(block_count, threads, [&](std::size_t rel_block) {
    const std::size_t block = first_block + rel_block;
    RandomStream rng(seed, block);
    std::vector<double> scratch(batch.feature_dim);
    const std::size_t block_begin = block * kSamplesPerBlock;
    const std::size_t block_end = block_begin + kSamplesPerBlock;
    for (std::size_t abs = block_begin; abs < block_end; ++abs) {
      if (abs >= first_sample + count) break;
      const bool keep = abs >= first_sample;
      const PriorDraw draw = sample_proposal(scenario.prior(), mode, rng, uniform_range);
      double* row = keep ? batch.features.data() + (abs - first_sample) * batch.feature_dim
                         : scratch.data();
      for (int m = 0; m < scenario.sensor_count(); ++m) {
        scenario.sensor(m).sample(draw.h, rng,
                                  std::span<double>(row + scenario.block_offset(m),
                                                    scenario.sensor(m).dims()));
      }
      if (keep) {
        batch.h[abs - first_sample] = draw.h;
        batch.w[abs - first_sample] = draw.weight;
      }
    }
  });
  return batch;
}

double PerformanceGrid::row_integral(int i) const {
  double s = density.row(i).sum();
  return decision_discrete ? s : s * decision_bin_width();
}

void PerformanceGrid::row_moments(int i, double* mean, double* stddev) const {
  const double scale = decision_discrete ? 1.0 : decision_bin_width();
  double m1 = 0.0, m2 = 0.0;
  for (int j = 0; j < static_cast<int>(decision_centers.size()); ++j) {
    const double p = density(i, j) * scale;
    m1 += decision_centers[j] * p;
    m2 += decision_centers[j] * decision_centers[j] * p;
  }
  *mean = m1;
  *stddev = std::sqrt(std::max(m2 - m1 * m1, 0.0));
}

PerformanceGrid estimate_performance(const Rule& rule, const SampleBatch& batch,
                                     const GridSpec& spec, int threads) {
  const Scenario& scenario = rule.scenario();
  const DecisionSpace& K = scenario.decision();
  const ObjectSpace& I = scenario.object();

  BinLayout dec_layout;
  if (K.discrete()) {
    dec_layout = discrete_layout(K.point_list());
  } else {
    Interval range = spec.decision_range.value_or(K.hull());
    if (!range.bounded()) {
      throw InputError(
          "estimate_performance: unbounded decision space requires an explicit decision range");
    }
    dec_layout = continuous_layout(range, spec.decision_bins, "decision grid");
  }
  BinLayout obj_layout;
  if (I.discrete()) {
    obj_layout = discrete_layout(I.point_list());
  } else {
    Interval range = spec.object_range.value_or(I.bounds());
    if (!range.bounded()) {
      if (batch.mode == ProposalMode::Uniform && batch.uniform_range) {
        range = *batch.uniform_range;
      } else {
        throw InputError(
            "estimate_performance: unbounded object space requires an explicit object range");
      }
    }
    obj_layout = continuous_layout(range, spec.object_bins, "object grid");
  }

  const int rows = obj_layout.bins;
  const int cols = dec_layout.bins;
  struct Partial {
    Eigen::MatrixXd raw;
    std::vector<double> row_weight, row_w2;
    std::vector<std::int64_t> row_count;
    std::int64_t oor_obj = 0, oor_dec = 0;
    double oor_dec_weight = 0.0;
  };

  const std::size_t count = batch.size();
  const std::size_t block_count = (count + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<Partial> partials(block_count);

  run_blocked(block_count, threads, [&](std::size_t b) {
    Partial& part = partials[b];
    part.raw = Eigen::MatrixXd::Zero(rows, cols);
    part.row_weight.assign(rows, 0.0);
    part.row_w2.assign(rows, 0.0);
    part.row_count.assign(rows, 0);
    const std::size_t begin = b * kSamplesPerBlock;
    const std::size_t end = std::min(begin + kSamplesPerBlock, count);
    std::vector<double> one_node(1), one_acc(1);
    for (std::size_t l = begin; l < end; ++l) {
      double weight = batch.w[l];
      if (spec.literal_weighting) {
        one_node[0] = batch.h[l];
        one_acc[0] = 0.0;
        for (int m = 0; m < scenario.sensor_count(); ++m) {
          scenario.sensor(m).accumulate_log_density(scenario.block(batch.row(l), m), one_node,
                                                    one_acc);
        }
        weight *= std::exp(one_acc[0]);
      }

      int row;
      if (obj_layout.discrete) {
        row = nearest_point_index(obj_layout.centers, batch.h[l]);
      } else {
        row = obj_layout.index(batch.h[l], nullptr);
        if (row < 0) {
          ++part.oor_obj;
          continue;
        }
      }

      const double c = rule.fuse(batch.row(l));
      int col;
      if (dec_layout.discrete) {
        col = nearest_point_index(dec_layout.centers, c);
      } else {
        col = dec_layout.index(c, nullptr);
        if (col < 0) {
          ++part.oor_dec;
          part.oor_dec_weight += weight;
          // The sample still occupies its object row for accounting purposes.
          part.row_count[row] += 1;
          part.row_weight[row] += weight;
          part.row_w2[row] += weight * weight;
          continue;
        }
      }
      part.raw(row, col) += weight;
      part.row_count[row] += 1;
      part.row_weight[row] += weight;
      part.row_w2[row] += weight * weight;
    }
  });

  PerformanceGrid grid;
  grid.decision_discrete = dec_layout.discrete;
  grid.object_discrete = obj_layout.discrete;
  grid.decision_centers = dec_layout.centers;
  grid.decision_edges = dec_layout.edges;
  grid.object_centers = obj_layout.centers;
  grid.object_edges = obj_layout.edges;
  grid.seed = batch.seed;
  grid.sample_count = count;
  grid.mode = batch.mode;
  grid.decision_width = dec_layout.discrete ? 1.0 : dec_layout.width;

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(rows, cols);
  std::vector<double> row_weight(rows, 0.0), row_w2(rows, 0.0);
  std::vector<std::int64_t> row_count(rows, 0);
  for (const Partial& part : partials) {  // block order: deterministic for any thread count
    raw += part.raw;
    for (int i = 0; i < rows; ++i) {
      row_weight[i] += part.row_weight[i];
      row_w2[i] += part.row_w2[i];
      row_count[i] += part.row_count[i];
    }
    grid.out_of_range_object += part.oor_obj;
    grid.out_of_range_decision += part.oor_dec;
    grid.out_of_range_decision_weight += part.oor_dec_weight;
  }

  grid.row_weight = row_weight;
  grid.row_count = row_count;
  grid.row_ess.assign(rows, 0.0);
  grid.populated.assign(rows, false);
  grid.density = Eigen::MatrixXd::Zero(rows, cols);
  const double width = grid.decision_width;
  for (int i = 0; i < rows; ++i) {
    grid.populated[i] = row_count[i] > 0;
    if (row_w2[i] > 0.0) grid.row_ess[i] = row_weight[i] * row_weight[i] / row_w2[i];
    const double in_range = raw.row(i).sum();
    if (in_range > 0.0) {
      grid.density.row(i) = raw.row(i) / (in_range * width);
    }
  }
  grid.raw_weights = std::move(raw);
  grid.row_weight_sq = std::move(row_w2);
  return grid;
}

RiskEstimate estimate_risk(const Rule& rule, const SampleBatch& batch, const CostFunction& cost,
                           double confidence, BoundMethod method, int threads) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InputError("estimate_risk: confidence must lie in (0, 1)");
  }
  if (method == BoundMethod::Conservative && !rule.scenario().even_cost_optimal()) {
    throw UnsupportedConfigError(
        "estimate_risk: the conservative bound applies only to scenarios tagged even_cost_optimal");
  }

  const std::size_t count = batch.size();
  const std::size_t block_count = (count + kSamplesPerBlock - 1) / kSamplesPerBlock;
  struct Partial {
    double sum = 0.0, sum_sq = 0.0, sum_w2 = 0.0;
  };
  std::vector<Partial> partials(block_count);

  run_blocked(block_count, threads, [&](std::size_t b) {
    Partial part;
    const std::size_t begin = b * kSamplesPerBlock;
    const std::size_t end = std::min(begin + kSamplesPerBlock, count);
    for (std::size_t l = begin; l < end; ++l) {
      const double W = cost(rule.fuse(batch.row(l)) - batch.h[l]);
      const double wcost = batch.w[l] * W;
      part.sum += wcost;
      part.sum_sq += wcost * wcost;
      part.sum_w2 += wcost * W;
    }
    partials[b] = part;
  });

  double sum = 0.0, sum_sq = 0.0, sum_w2 = 0.0;
  for (const Partial& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    sum_w2 += p.sum_w2;
  }

  const double L = static_cast<double>(count);
  RiskEstimate est;
  est.estimate = sum / L;
  est.sample_count = count;
  est.confidence = confidence;
  const double inv_erf = boost::math::erf_inv(confidence);
  if (method == BoundMethod::CltEmpirical) {
    double var = 0.0;
    if (count > 1) var = std::max(sum_sq - sum * sum / L, 0.0) / (L - 1.0);
    est.half_width = std::sqrt(2.0 / L) * std::sqrt(var) * inv_erf;
    est.method = "clt-empirical";
  } else {
    const double bw2 = sum_w2 / L;  // B_L(W^2)
    est.half_width = std::sqrt(2.0 / L) * (std::sqrt(std::max(bw2, 0.0)) + est.estimate) * inv_erf;
    est.method = "conservative-bound";
  }
  return est;
}

GridRisk risk_from_grid(const PerformanceGrid& grid, const Prior& prior, const CostFunction& cost) {
  GridRisk out;
  const int rows = static_cast<int>(grid.object_centers.size());
  const int cols = static_cast<int>(grid.decision_centers.size());
  const double width = grid.decision_width;
  double accounted = 0.0;
  for (int i = 0; i < rows; ++i) {
    double mass;
    if (grid.object_discrete) {
      mass = prior.discrete_weight(grid.object_centers[i]);
    } else {
      mass = prior.mass(grid.object_edges[i], grid.object_edges[i + 1]);
    }
    if (!grid.populated[i]) {
      out.unaccounted_prior_mass += mass;
      continue;
    }
    accounted += mass;
    double row_cost = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double p = grid.density(i, j) * width;
      if (p > 0.0) row_cost += p * cost(grid.decision_centers[j] - grid.object_centers[i]);
    }
    out.risk += mass * row_cost;
  }
  out.unaccounted_prior_mass += std::max(1.0 - accounted - out.unaccounted_prior_mass, 0.0);
  return out;
}

PerformanceGrid merge_grids(const PerformanceGrid& a, const PerformanceGrid& b) {
  if (a.decision_centers != b.decision_centers || a.object_centers != b.object_centers ||
      a.decision_discrete != b.decision_discrete || a.object_discrete != b.object_discrete ||
      a.seed != b.seed) {
    throw InputError("merge_grids: grids must share layout and seed");
  }
  PerformanceGrid out = a;
  out.sample_count = a.sample_count + b.sample_count;
  out.raw_weights = a.raw_weights + b.raw_weights;
  out.out_of_range_object = a.out_of_range_object + b.out_of_range_object;
  out.out_of_range_decision = a.out_of_range_decision + b.out_of_range_decision;
  out.out_of_range_decision_weight = a.out_of_range_decision_weight + b.out_of_range_decision_weight;
  const int rows = static_cast<int>(out.object_centers.size());
  const double width = out.decision_width;
  for (int i = 0; i < rows; ++i) {
    out.row_weight[i] = a.row_weight[i] + b.row_weight[i];
    out.row_weight_sq[i] = a.row_weight_sq[i] + b.row_weight_sq[i];
    out.row_count[i] = a.row_count[i] + b.row_count[i];
    out.populated[i] = out.row_count[i] > 0;
    out.row_ess[i] =
        out.row_weight_sq[i] > 0.0 ? out.row_weight[i] * out.row_weight[i] / out.row_weight_sq[i]
                                   : 0.0;
    const double in_range = out.raw_weights.row(i).sum();
    if (in_range > 0.0) {
      out.density.row(i) = out.raw_weights.row(i) / (in_range * width);
    } else {
      out.density.row(i).setZero();
    }
  }
  return out;
}

}  // namespace bayesfuse::mc
