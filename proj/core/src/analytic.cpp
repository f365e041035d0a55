#include "bayesfuse/analytic.hpp"

#include <cmath>

#include "bayesfuse/errors.hpp"

namespace bayesfuse::analytic {

void validate(const GaussParams& p) {
  if (!(p.v > 0.0)) throw InputError("gauss oracle: v must be positive");
  if (p.M < 2 || p.M % 2 != 0) throw InputError("gauss oracle: M must be even and >= 2");
  if (p.u == 0.0) throw InputError("gauss oracle: u must be nonzero");
}

double gauss_fusion(const GaussParams& p, std::span<const double> a) {
  validate(p);
  double s = 0.0;
  for (double x : a) s += x;
  return p.u * s / (p.M * p.u * p.u + p.v);
}

double gauss_performance(const GaussParams& p, double c, double h) {
  validate(p);
  const double mu2 = p.M * p.u * p.u;
  const double t = mu2 * (c - h) + c * p.v;
  const double norm = (mu2 + p.v) / (std::abs(p.u) * std::sqrt(2.0 * M_PI * p.M * p.v));
  return norm * std::exp(-t * t / (2.0 * p.M * p.u * p.u * p.v));
}

double gauss_risk(const GaussParams& p) {
  validate(p);
  return p.v / (p.M * p.u * p.u + p.v);
}

double gauss_linear_rule_risk(const GaussParams& p, double beta) {
  validate(p);
  // c = beta * S with S | H ~ N(M u H, M v) and H ~ N(0, 1):
  // E[(c - H)^2] = beta^2 (M^2 u^2 + M v) - 2 beta M u + 1.
  return beta * beta * (static_cast<double>(p.M) * p.M * p.u * p.u + p.M * p.v) -
         2.0 * beta * p.M * p.u + 1.0;
}

void validate(const ExpoParams& p) {
  if (p.M < 1) throw InputError("expo oracle: M must be >= 1");
}

double expo_fusion(const ExpoParams& p, std::span<const double> a) {
  validate(p);
  double s = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw InputError("expo oracle: features must be nonnegative");
    s += x;
  }
  return (p.M + 1.0) / (s + 1.0);
}

double expo_performance(const ExpoParams& p, double c, double h) {
  validate(p);
  if (!(c > 0.0)) throw InputError("expo oracle: performance requires c > 0");
  if (!(h >= 0.0)) throw InputError("expo oracle: h must be nonnegative");
  const double M = p.M;
  if (c >= M + 1.0) return 0.0;
  if (h == 0.0) return 0.0;
  const double t = (M + 1.0) / c - 1.0;
  const double log_d = std::log(M + 1.0) + (M + 1.0) * std::log(h) - std::lgamma(M + 1.0) -
                       2.0 * std::log(c) + M * std::log(t) - h * t;
  return std::exp(log_d);
}

double expo_risk(const ExpoParams& p) {
  validate(p);
  return 2.0 / (p.M + 2.0);
}

BinaryRates poisson_binary_rates() {
  // A + B | H = h is Poisson(2h); the rule decides 1 iff A + B <= 2.
  const auto tail_le2 = [](double lambda) {
    double total = 0.0;
    for (int k = 0; k <= 2; ++k) {
      total += std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
    }
    return total;
  };
  BinaryRates r;
  r.false_positive = 1.0 - tail_le2(2.0);  // P(C=2 | H=1)
  r.miss = tail_le2(4.0);                  // P(C=1 | H=2)
  return r;
}

double poisson_binary_rule_risk(const std::function<int(int, int)>& rule, int truncation) {
  double risk = 0.0;
  for (int hi = 1; hi <= 2; ++hi) {
    const double h = hi;
    std::vector<double> pmf(truncation + 1);
    for (int k = 0; k <= truncation; ++k) {
      pmf[k] = std::exp(-h + k * std::log(h) - std::lgamma(k + 1.0));
    }
    for (int a = 0; a <= truncation; ++a) {
      for (int b = 0; b <= truncation; ++b) {
        const double c = rule(a, b);
        risk += 0.5 * pmf[a] * pmf[b] * (c - h) * (c - h);
      }
    }
  }
  return risk;
}

PbpoGauss pbpo_gauss(const GaussParams& p) {
  validate(p);
  if (p.u != 1.0 || p.v != 1.0) {
    throw UnsupportedConfigError("pbpo oracle: defined for u = v = 1 only");
  }
  const double M = p.M;
  PbpoGauss out;
  out.local_coeff = 1.0 / (M / 2.0 + 1.0);
  out.system_coeff = (M + 2.0) / (2.0 * M + 2.0);
  out.risk = 1.0 / (M + 1.0);
  return out;
}

}  // namespace bayesfuse::analytic
