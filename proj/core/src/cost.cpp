#include "bayesfuse/cost.hpp"

#include <cmath>

#include "bayesfuse/errors.hpp"

namespace bayesfuse {

CostFunction CostFunction::quadratic() {
  CostFunction w;
  w.even_coeffs_ = {0.5};
  w.description_ = "quadratic";
  return w;
}

CostFunction CostFunction::even_power(int p) {
  if (p < 2 || p % 2 != 0) throw InputError("cost: power form requires an even p >= 2");
  CostFunction w;
  w.even_coeffs_.assign(p / 2, 0.0);
  w.even_coeffs_.back() = 1.0 / p;
  w.description_ = "power:" + std::to_string(p);
  return w;
}

CostFunction CostFunction::even_polynomial(std::vector<std::pair<int, double>> coeffs) {
  CostFunction w;
  w.description_ = "poly:";
  for (const auto& [power, c] : coeffs) {
    if (power < 2 || power % 2 != 0) {
      throw InputError("cost: polynomial powers must be even and >= 2");
    }
    if (!(c >= 0.0)) throw InputError("cost: polynomial coefficients must be nonnegative");
    const std::size_t k = static_cast<std::size_t>(power / 2);
    if (w.even_coeffs_.size() < k) w.even_coeffs_.resize(k, 0.0);
    w.even_coeffs_[k - 1] += c;
  }
  for (std::size_t k = 0; k < w.even_coeffs_.size(); ++k) {
    if (w.even_coeffs_[k] != 0.0) {
      w.description_ += (w.description_.back() == ':' ? "" : ",");
      w.description_ += std::to_string(2 * (k + 1)) + "=" + std::to_string(w.even_coeffs_[k]);
    }
  }
  return w;
}

CostFunction CostFunction::squared_error() {
  CostFunction w = even_polynomial({{2, 1.0}});
  w.description_ = "squared-error";
  return w;
}

double CostFunction::operator()(double x) const {
  const double y = x * x;
  double acc = 0.0;
  for (std::size_t k = even_coeffs_.size(); k-- > 0;) {
    acc = acc * y + even_coeffs_[k];
  }
  return acc * y;
}

}  // namespace bayesfuse
