#pragma once

#include <functional>
#include <span>

namespace bayesfuse::analytic {

/// Closed forms for the all-Gaussian scenario: standard-normal object, M
/// features split over two sensors, each feature Gaussian with mean u*h and
/// variance v.  Deliberately independent of the generic engine: these are the
/// cross-validation oracles.
struct GaussParams {
  double u = 1.0;
  double v = 1.0;
  int M = 2;  // total feature count, even, >= 2
};

void validate(const GaussParams& p);

/// u * sum(a) / (M u^2 + v).
double gauss_fusion(const GaussParams& p, std::span<const double> a);

/// Conditional decision density d_{C|H}(c, h).
double gauss_performance(const GaussParams& p, double c, double h);

/// Quadratic Bayes risk v / (M u^2 + v).
double gauss_risk(const GaussParams& p);

/// Quadratic risk of an arbitrary linear rule c = beta * sum(a).
double gauss_linear_rule_risk(const GaussParams& p, double beta);

struct ExpoParams {
  int M = 1;  // sensor count >= 1
};

void validate(const ExpoParams& p);

/// (M+1) / (sum(a) + 1).
double expo_fusion(const ExpoParams& p, std::span<const double> a);

/// d_{C|H}(c, h) for c in (0, M+1]; identically zero for c > M+1; c <= 0 is a
/// domain error.
double expo_performance(const ExpoParams& p, double c, double h);

/// 2 / (M + 2).
double expo_risk(const ExpoParams& p);

/// Error rates of the two-class Poisson fusion rule (decide 1 iff A+B <= 2),
/// computed by enumerating Poisson tail sums rather than hard-coding.  Both
/// rates condition on the true class:
/// false_positive = P(C=2 | H=1), miss = P(C=1 | H=2).
struct BinaryRates {
  double false_positive;
  double miss;
};
BinaryRates poisson_binary_rates();

/// Exact quadratic Bayes risk of an arbitrary decision table for the
/// two-class Poisson example (equal prior on {1,2}, two Poisson(h) counts),
/// enumerated over the count grid; the truncated tail is below 1e-40.
double poisson_binary_rule_risk(const std::function<int(int, int)>& rule, int truncation = 60);

/// Two-stage distributed composition for the all-Gaussian scenario with
/// u = v = 1: per-sensor local rules, the system rule over the local outputs,
/// and the end-to-end risk 1/(M+1).
struct PbpoGauss {
  double local_coeff;   // A* = local_coeff * sum of the sensor's M/2 features
  double system_coeff;  // C  = system_coeff * (A* + B*)
  double risk;          // 1 / (M + 1)
};
PbpoGauss pbpo_gauss(const GaussParams& p);

}  // namespace bayesfuse::analytic
