#include "ipm/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ipm/errors.hpp"

namespace ipm {

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  if (alpha <= -1.0 || beta <= -1.0) throw DomainError("Jacobi exponents must exceed -1");
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n), off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    off(k - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NoConvergenceError("Golub-Welsch eigensolver failed");

  const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                         std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule r = gauss_jacobi(n, 0.0, 0.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = mid + half * r.nodes[k];
    r.weights[k] *= half;
  }
  return r;
}

QuadratureRule gauss_power_weight(int n, double lambda) {
  if (lambda <= 0.0) throw DomainError("power weight exponent must be positive");
  const double beta = lambda - 1.0;
  QuadratureRule r = gauss_jacobi(n, 0.0, beta);
  // s = (1+x)/2, (1+x)^beta dx = 2^(beta+1) s^beta ds
  const double scale = std::pow(2.0, -(beta + 1.0));
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = 0.5 * (1.0 + r.nodes[k]);
    r.weights[k] *= scale;
  }
  return r;
}

}  // namespace ipm
