#pragma once

#include "ipm/angular_grid.hpp"
#include "ipm/weight_params.hpp"

namespace ipm {

enum class StreamVariant { ivp, bvp, localized };

// BVP closed form with kernels applied to M (default) or to M'.
enum class BvpForm { integrated_by_parts, derivative };

enum class BumpProfile { cubic, smooth };

struct StreamSolution {
  GridFunction G;   // odd
  GridFunction Gp;  // even
  GridFunction I1;  // ∫_0^θ M' cos²φ cos2φ dφ
  GridFunction I2;  // ∫_0^θ M' cos²φ sin2φ dφ
  StreamVariant variant = StreamVariant::bvp;
};

namespace kernel {
double k1(double t);  // cos² cos2
double k2(double t);  // cos² sin2
double K1(double t);  // k2'
double K2(double t);  // -k1'
}  // namespace kernel

// G'' + 4G = M' cos²θ with G(0) = 0, G'(0) = 1.
StreamSolution solve_ivp(const GridFunction& M);

// G'' + 4G = M' cos²θ with G(0) = G(L) = 0.
StreamSolution solve_bvp(const GridFunction& M, BvpForm form = BvpForm::integrated_by_parts);

struct LocalizedStream {
  StreamSolution local;      // G̃_loc, zero value and slope at 0
  StreamSolution corrected;  // G̃_loc - G̃_nl, vanishes at L
};

// M_tilde must have zero 2-jet at θ = 0.
LocalizedStream solve_localized(const GridFunction& M_tilde, const WeightParams& wp,
                                BumpProfile bump = BumpProfile::cubic);

double bump_eta(double x, BumpProfile profile = BumpProfile::cubic);
double bump_eta_derivative(double x, BumpProfile profile = BumpProfile::cubic);

// Nodal residual G'' + 4G - M' cos²θ, with G'' taken from the solution's own G'.
GridFunction stream_residual(const StreamSolution& s, const GridFunction& M);

}  // namespace ipm
