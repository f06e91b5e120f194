#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ipm {

// out = F(y, θ); y and out have the problem dimension.
using FixedPointMap =
    std::function<void(std::span<const double> y, double theta, std::span<double> out)>;

// y_j(θ) = θ² G_j(y, θ) + θ^-λ_j ∫_0^θ φ^(λ_j - 1) (v_j + φ² F_j(y, φ)) dφ
struct FixedPointProblem {
  std::vector<double> lambdas;
  std::vector<double> v;
  FixedPointMap F;  // may be empty (zero)
  FixedPointMap G;  // may be empty (zero)
  double d_hint = 0.2;
  std::size_t nodes = 24;
  double tol = 1e-12;
  int max_iterations = 400;
  int max_shrinks = 8;
};

struct FixedPointSolution {
  double d = 0.0;
  std::vector<double> nodes;               // Chebyshev-Lobatto points of [0, d]
  std::vector<std::vector<double>> y;      // y[j][i]: component j at node i
  int iterations = 0;
  int shrinks = 0;
  double residual = 0.0;                   // last sup-norm update
  double contraction = 0.0;                // observed ratio of successive updates
  double sup_y = 0.0;
  double sup_v = 0.0;
  bool within_growth_bound = false;         // ‖y‖∞ ≤ 2‖v‖∞

  double evaluate(std::size_t component, double theta) const;
};

FixedPointSolution solve_singular_fixed_point(const FixedPointProblem& problem);

}  // namespace ipm
