#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bayesfuse {

/// Even, convex, nonnegative cost W(c - h) with W(0) = 0.  Built-in forms:
/// quadratic x^2/2, even power x^p/p, and even polynomials with nonnegative
/// coefficients (which covers the plain squared error x^2).
class CostFunction {
 public:
  static CostFunction quadratic();
  static CostFunction even_power(int p);
  /// coeffs: (even power >= 2, coefficient >= 0) pairs.  An empty list is the
  /// identically-zero cost.
  static CostFunction even_polynomial(std::vector<std::pair<int, double>> coeffs);
  static CostFunction squared_error();

  double operator()(double x) const;
  const std::string& describe() const { return description_; }

 private:
  CostFunction() = default;
  // Coefficients on x^{2k}, k = 1..degree; evaluated by Horner in x^2.
  std::vector<double> even_coeffs_;
  std::string description_;
};

}  // namespace bayesfuse
