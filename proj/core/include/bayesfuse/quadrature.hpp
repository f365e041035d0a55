#pragma once

#include <vector>

namespace bayesfuse {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes/weights such that sum_i w_i f(x_i) ~ integral of f against the
/// standard normal density over the real line.
QuadratureRule gauss_hermite_prob(int n);

/// Nodes/weights for the weight e^{-x} on [0, inf):
/// sum_i w_i f(x_i) ~ integral_0^inf f(x) e^{-x} dx.
QuadratureRule gauss_laguerre(int n);

/// Nodes/weights for unit weight on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped onto [lo, hi].
QuadratureRule gauss_legendre_on(int n, double lo, double hi);

}  // namespace bayesfuse
