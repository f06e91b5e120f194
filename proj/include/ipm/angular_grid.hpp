#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ipm/dense.hpp"

namespace ipm {

enum class GridKind { clustered, uniform };
enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline Parity flip(Parity p, int times) { return (times % 2 == 0) ? p : flip(p); }
inline double parity_sign(Parity p) { return p == Parity::even ? 1.0 : -1.0; }

inline constexpr int kMaxDerivativeOrder = 5;

// Nodes on [0, L] for functions with a definite parity about θ = 0.
//
// clustered: Chebyshev-Lobatto points of [-L, L] (2n-1 of them) folded onto
// [0, L]. Operators are those of the global interpolant of the parity
// extension, so the grid clusters at L only.
// uniform: equispaced nodes, 4th-order finite differences and local
// degree-5 interpolation; parity ghosts at 0, one-sided closures at L.
class AngularGrid {
 public:
  static std::shared_ptr<const AngularGrid> clustered(double L, std::size_t n);
  static std::shared_ptr<const AngularGrid> uniform(double L, std::size_t n);

  double L() const { return L_; }
  std::size_t n() const { return nodes_.size(); }
  GridKind kind() const { return kind_; }
  const std::vector<double>& nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& quad_weights() const;
  double min_spacing() const;

  // Matrix of d^order/dθ^order acting on nodal values of parity p.
  const DenseMatrix& derivative_matrix(int order, Parity p) const;
  // First derivative biased against a flow in direction dir (+1 toward L,
  // −1 toward 0). Uniform grids use 4th-order stencils with three upwind
  // points; clustered grids return the spectral matrix.
  const DenseMatrix& upwind_derivative_matrix(Parity p, int dir) const;
  // Row j gives ∫_0^{θ_j} f for f of parity p.
  const DenseMatrix& cumulative_matrix(Parity p) const;
  std::vector<double> interpolation_row(double theta, Parity p) const;
  // Row of the order-th derivative of the interpolant at θ. Clustered grids
  // differentiate the Chebyshev series at θ itself, which stays accurate in
  // the interior where interpolating nodal derivatives would not.
  std::vector<double> derivative_row(double theta, int order, Parity p) const;
  // Σ_i w_i · derivative_row(θ_i, order, p).
  std::vector<double> derivative_row(std::span<const double> thetas, std::span<const double> w,
                                     int order, Parity p) const;
  double interpolate(std::span<const double> values, Parity p, double theta) const;
  // ∫_0^θ of the interpolant.
  double antiderivative_at(std::span<const double> values, Parity p, double theta) const;

  AngularGrid(const AngularGrid&) = delete;
  AngularGrid& operator=(const AngularGrid&) = delete;

 private:
  AngularGrid(GridKind kind, double L, std::size_t n);

  DenseMatrix build_derivative_clustered(int order, Parity p) const;
  DenseMatrix build_derivative_uniform(int order, Parity p) const;
  DenseMatrix build_upwind_uniform(Parity p, int dir) const;
  DenseMatrix build_cumulative_clustered(Parity p) const;
  DenseMatrix build_cumulative_uniform(Parity p) const;
  std::vector<double> chebyshev_coefficients(std::span<const double> values, Parity p) const;
  int uniform_window_start(std::size_t interval) const;

  GridKind kind_;
  double L_;
  std::vector<double> nodes_;

  mutable std::array<std::array<std::once_flag, 2>, kMaxDerivativeOrder + 1> deriv_once_;
  mutable std::array<std::array<DenseMatrix, 2>, kMaxDerivativeOrder + 1> deriv_;
  mutable std::array<std::array<std::once_flag, 2>, 2> upwind_once_;
  mutable std::array<std::array<DenseMatrix, 2>, 2> upwind_;
  mutable std::array<std::once_flag, 2> cumul_once_;
  mutable std::array<DenseMatrix, 2> cumul_;
  mutable std::once_flag dct_once_;
  mutable DenseMatrix dct_;  // (k, m) entry: weight of T_m coefficient on folded value k
  mutable std::once_flag weights_once_;
  mutable std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const AngularGrid>;

struct GridFunction {
  GridPtr grid;
  std::vector<double> values;
  Parity parity = Parity::even;

  GridFunction() = default;
  GridFunction(GridPtr g, std::vector<double> v, Parity p);

  static GridFunction zeros(GridPtr g, Parity p);
  static GridFunction sample(GridPtr g, const std::function<double(double)>& fn, Parity p);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double theta(std::size_t i) const { return grid->node(i); }
  double max_abs() const;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);
GridFunction operator-(const GridFunction& a);
// Pointwise multiply by a function of θ with the given parity.
GridFunction multiply(const GridFunction& a, const std::function<double(double)>& w, Parity wp);

GridFunction differentiate(const GridFunction& f, int order);
// f' with each node's stencil chosen from the sign of velocity there.
GridFunction differentiate_upwind(const GridFunction& f, std::span<const double> velocity);
double integrate(const GridFunction& f, double a, double b);
GridFunction integrate_indefinite(const GridFunction& f);
double interpolate(const GridFunction& f, double theta);

struct TaylorJet {
  std::vector<double> values;  // f(0), f'(0), ..., f^(k)(0)
  double condition = 0.0;      // largest 1-norm among the derivative rows used
};
TaylorJet taylor_jet(const GridFunction& f, int k);

// Finite-difference weights (Fornberg) for derivatives 0..max_order at z.
std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x,
                                                  int max_order);

}  // namespace ipm
