#include "bayesfuse/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace bayesfuse {
namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal Jacobi
// matrix of the orthogonal-polynomial recurrence; weight_i is mu0 times the
// squared first component of the i-th normalized eigenvector.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                            double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = diag(i);
    if (i + 1 < n) {
      jacobi(i, i + 1) = offdiag(i);
      jacobi(i + 1, i) = offdiag(i);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("quadrature: eigensolver failed");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double q0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * q0 * q0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_hermite_prob(int n) {
  // Physicists' Hermite (weight e^{-x^2}), then rescale to the standard
  // normal density: x -> sqrt(2) x, w -> w / sqrt(pi).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
  QuadratureRule rule = golub_welsch(diag, off, std::sqrt(M_PI));
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] *= std::sqrt(2.0);
    rule.weights[i] *= inv_sqrt_pi;
  }
  return rule;
}

QuadratureRule gauss_laguerre(int n) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(n - 1);
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) off(k - 1) = static_cast<double>(k);
  return golub_welsch(diag, off, 1.0);
}

QuadratureRule gauss_legendre(int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(diag, off, 2.0);
}

QuadratureRule gauss_legendre_on(int n, double lo, double hi) {
  QuadratureRule rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

}  // namespace bayesfuse
