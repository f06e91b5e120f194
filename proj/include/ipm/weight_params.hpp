#pragma once

namespace ipm {

// Parameters of the H̃⁴ weights: φ = θ^-8 on (0, l1], θ^-K in between,
// constant past l2; ψ = 1, θ^-K, then (L-θ)^{13/2} decay.
struct WeightParams {
  double L = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double K = 0.0;
  double B = 0.0;

  // l2 = L - l1^2, K = l1^-4.
  static WeightParams linked(double L, double l1 = 0.3, double B = 1e4);

  // Throws DomainError unless 0 < l1 < l2 < L, l1 < 1, L - l2 < 1, K > 10.
  void validate() const;
};

}  // namespace ipm
