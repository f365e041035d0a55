#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bayesfuse/fusion.hpp"
#include "bayesfuse/scenario.hpp"

namespace bayesfuse::mc {

/// Samples are drawn in blocks of this size; block b of a batch uses
/// RandomStream(seed, b), so any block range can be (re)drawn independently
/// and a batch split at block boundaries concatenates to the full batch.
inline constexpr std::size_t kSamplesPerBlock = 8192;

/// L draws (h_l, a_l, w_l) from the proposal distribution
/// (prod_m d_{A_m|H}) d_{H'}; w_l = d_H(h_l)/d_{H'}(h_l), identically 1 in
/// prior mode.
struct SampleBatch {
  std::vector<double> h;
  std::vector<double> w;
  std::vector<double> features;  // row-major, size() * feature_dim
  int feature_dim = 0;
  std::uint64_t seed = 0;
  std::size_t first_sample = 0;  // absolute index of row 0 in the seeded sequence
  ProposalMode mode = ProposalMode::Prior;
  std::optional<Interval> uniform_range;

  std::size_t size() const { return h.size(); }
  std::span<const double> row(std::size_t l) const {
    return {features.data() + l * feature_dim, static_cast<std::size_t>(feature_dim)};
  }
};

/// Draws samples [first_sample, first_sample + count) of the seeded sequence.
/// Deterministic given (scenario, seed); sub-ranges of the same seed
/// concatenate to the full batch.
SampleBatch draw_batch(const Scenario& scenario, std::size_t count, ProposalMode mode,
                       std::uint64_t seed, std::optional<Interval> uniform_range = {},
                       std::size_t first_sample = 0, int threads = 1);

struct GridSpec {
  int decision_bins = 200;
  std::optional<Interval> decision_range;  // required when the decision space is unbounded
  int object_bins = 64;
  std::optional<Interval> object_range;  // required when the object space is unbounded
  /// Diagnostic variant: additionally weight each sample by its joint
  /// feature density.  Provided for side-by-side comparison only, with no
  /// consistency claim; rows are still self-normalized.
  bool literal_weighting = false;
};

/// Discretized estimate of d_{C|H}; each populated row integrates/sums to 1.
struct PerformanceGrid {
  bool decision_discrete = false;
  bool object_discrete = false;
  std::vector<double> decision_centers;
  std::vector<double> decision_edges;  // size bins+1; empty when discrete
  std::vector<double> object_centers;
  std::vector<double> object_edges;

  Eigen::MatrixXd density;      // rows = object bins, cols = decision bins; normalized
  Eigen::MatrixXd raw_weights;  // pre-normalization accumulated weights
  std::vector<double> row_weight;
  std::vector<double> row_weight_sq;
  std::vector<std::int64_t> row_count;
  std::vector<double> row_ess;  // Kish effective sample size
  std::vector<bool> populated;

  std::int64_t out_of_range_object = 0;
  std::int64_t out_of_range_decision = 0;
  double out_of_range_decision_weight = 0.0;

  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  ProposalMode mode = ProposalMode::Prior;
  double decision_width = 1.0;  // uniform bin width; 1 for discrete layouts

  double decision_bin_width() const { return decision_width; }
  /// Integral (or sum) of a row; 1 for populated rows.
  double row_integral(int i) const;
  /// Mean and standard deviation of the decision within a row.
  void row_moments(int i, double* mean, double* stddev) const;
};

PerformanceGrid estimate_performance(const Rule& rule, const SampleBatch& batch,
                                     const GridSpec& spec, int threads = 1);

enum class BoundMethod { CltEmpirical, Conservative };

struct RiskEstimate {
  double estimate = 0.0;
  std::size_t sample_count = 0;
  double confidence = 0.95;
  double half_width = 0.0;
  std::string method;  // "clt-empirical" | "conservative-bound"
  double ci_low() const { return estimate - half_width; }
  double ci_high() const { return estimate + half_width; }
};

/// B_L(W) = (1/L) sum w_l W(fuse(a_l) - h_l) with a two-sided CLT interval
/// of confidence R: half-width sqrt(2/L) * s * erfinv(R).  The conservative
/// method swaps in the moment bound
/// sqrt(2/L) * (B_L(W^2)^{1/2} + B_L(W)) * erfinv(R), valid for scenarios
/// tagged even_cost_optimal; it requires that tag.
RiskEstimate estimate_risk(const Rule& rule, const SampleBatch& batch, const CostFunction& cost,
                           double confidence, BoundMethod method = BoundMethod::CltEmpirical,
                           int threads = 1);

struct GridRisk {
  double risk = 0.0;
  /// Prior mass sitting on empty rows or outside the grid; reported, never
  /// silently reassigned.
  double unaccounted_prior_mass = 0.0;
};

/// Discretized double integral of cost against the grid and the prior.
GridRisk risk_from_grid(const PerformanceGrid& grid, const Prior& prior, const CostFunction& cost);

/// Bin-wise merge; operands must share the same layout and come from the
/// same seeded sequence (disjoint block-aligned ranges).
PerformanceGrid merge_grids(const PerformanceGrid& a, const PerformanceGrid& b);

}  // namespace bayesfuse::mc
