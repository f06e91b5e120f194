#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ipm/angular_grid.hpp"
#include "ipm/dense.hpp"
#include "ipm/weight_params.hpp"

namespace ipm {

double weight_phi(double theta, const WeightParams& wp);
double weight_psi(double theta, const WeightParams& wp);

// f(0) + ½ f''(0) θ² on the grid.
GridFunction taylor_part(const GridFunction& f);

// Quadrature factorization of the H̃⁴ form: ⟨f, g⟩ = (Rf)·(Rg) where the rows
// of R are f(0), f''(0), √(B w φ)·(f − ℙ₂f)(θ_q) and √(w ψ)·f⁽⁴⁾(θ_q). Points
// where both weights fall below 1e-30 of their value at ℓ₁ are dropped.
class H4TildeForm {
 public:
  H4TildeForm(GridPtr grid, const WeightParams& wp);

  double inner(const GridFunction& f, const GridFunction& g) const;
  // f(0)g(0), f''(0)g''(0), B∫(f−ℙ₂f)(g−ℙ₂g)φ, ∫f⁽⁴⁾g⁽⁴⁾ψ
  std::array<double, 4> pieces(const GridFunction& f, const GridFunction& g) const;
  // ∫_0^ℓ₁ (f − ℙ₂f)² θ⁻⁸ and ∫_0^ℓ₁ (f⁽⁴⁾)²
  std::pair<double, double> hardy_sides(const GridFunction& f) const;

  const DenseMatrix& factor() const { return R_; }
  DenseMatrix gram() const;  // RᵀR
  const WeightParams& params() const { return wp_; }
  const GridPtr& grid() const { return grid_; }

  // Last quadrature point; past it both weights are below the floor.
  double window() const { return window_; }
  // g times a smooth step equal to 1 on [0, window] and 0 on [0.95L, L]. The
  // form only reads g on the window, but its derivative rows interpolate g
  // globally, and images of the linearized operator are only Hölder at L.
  GridFunction localize(const GridFunction& g) const;

 private:
  GridPtr grid_;
  WeightParams wp_;
  DenseMatrix R_;
  double window_ = 0.0;
  std::size_t phi_begin_ = 2, phi_near_end_ = 2, phi_end_ = 2, psi_near_end_ = 2;
};

double h4tilde_inner(const GridFunction& f, const GridFunction& g, const WeightParams& wp);

// ∫ f g + ∫ f⁽⁴⁾ g⁽⁴⁾ (L − θ)^{13/2}
class H4Form {
 public:
  explicit H4Form(GridPtr grid);
  double inner(const GridFunction& f, const GridFunction& g) const;
  double norm(const GridFunction& f) const;

 private:
  GridPtr grid_;
  DenseMatrix R_;
};

struct NormReport {
  double h4tilde = 0.0;
  double h4 = 0.0;
  std::array<double, 4> pieces{};
};

NormReport norms(const GridFunction& f, const WeightParams& wp);

// Seeded even samples c₀ + c₂θ² + θ⁴ Σ_{k<6} a_k cos(kπθ/L).
std::vector<GridFunction> random_even_samples(const GridPtr& grid, std::size_t count,
                                              std::uint64_t seed);

// 1, θ², θ⁴cos(kπθ/L) for k < modes: the span of the sample family when modes = 6.
std::vector<GridFunction> sample_basis(const GridPtr& grid, std::size_t modes);

struct InequalityReport {
  double equivalence_upper = 0.0;  // max ‖f‖_H̃⁴ / ‖f‖_H⁴
  double equivalence_lower = 0.0;  // max ‖f‖_H⁴ / ‖f‖_H̃⁴
  double hardy = 0.0;              // max ∫(f−ℙ₂f)²θ⁻⁸ / ∫(f⁽⁴⁾)² on (0, ℓ₁)
  double hardy_bound = 0.0;        // (2/7 · 2/5 · 2/3 · 2)²
  std::array<double, 3> interpolation{};  // k = 1, 2, 3 with p = 1/2, 5/2, 9/2
  std::array<double, 4> embedding{};      // ‖(L−θ)^j f⁽ʲ⁾‖∞ / ‖f‖_H⁴
  double algebra = 0.0;                   // ‖fg‖_H⁴ / (‖f‖_H⁴ ‖g‖_H⁴)
  std::size_t samples = 0;
};

InequalityReport verify_inequalities(const std::vector<GridFunction>& samples,
                                     const WeightParams& wp);

}  // namespace ipm
