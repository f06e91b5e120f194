#pragma once

#include <vector>

namespace ipm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Jacobi on [-1, 1] with weight (1-x)^alpha (1+x)^beta (Golub-Welsch).
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Rule on [0, 1] for the weight s^(lambda-1).
QuadratureRule gauss_power_weight(int n, double lambda);

}  // namespace ipm
