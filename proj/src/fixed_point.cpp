#include "ipm/fixed_point.hpp"

#include <cmath>
#include <numbers>

#include "ipm/dense.hpp"
#include "ipm/errors.hpp"
#include "ipm/quadrature.hpp"

namespace ipm {
namespace {

std::vector<double> lobatto_nodes(std::size_t q, double d) {
  std::vector<double> x(q);
  for (std::size_t i = 0; i < q; ++i)
    x[i] = 0.5 * d * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / (q - 1)));
  x.front() = 0.0;
  x.back() = d;
  return x;
}

// Barycentric interpolation row for Chebyshev-Lobatto nodes.
void barycentric_row(const std::vector<double>& x, double t, std::span<double> row) {
  const std::size_t q = x.size();
  double denom = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double diff = t - x[k];
    if (diff == 0.0) {
      std::fill(row.begin(), row.end(), 0.0);
      row[k] = 1.0;
      return;
    }
    double w = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == q - 1) w *= 0.5;
    row[k] = w / diff;
    denom += row[k];
  }
  for (double& r : row) r /= denom;
}

// (K w)(θ_i) = ∫_0^1 s^(λ-1) w(θ_i s) ds for the nodal interpolant of w.
DenseMatrix power_weight_operator(const std::vector<double>& x, double lambda) {
  const std::size_t q = x.size();
  const QuadratureRule rule = gauss_power_weight(static_cast<int>(q) + 8, lambda);
  DenseMatrix K(q, q);
  std::vector<double> row(q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t s = 0; s < rule.nodes.size(); ++s) {
      barycentric_row(x, x[i] * rule.nodes[s], row);
      for (std::size_t k = 0; k < q; ++k) K(i, k) += rule.weights[s] * row[k];
    }
  }
  return K;
}

struct Attempt {
  bool converged = false;
  FixedPointSolution sol;
};

Attempt iterate(const FixedPointProblem& pb, double d) {
  const std::size_t dim = pb.lambdas.size();
  const std::size_t q = pb.nodes;
  Attempt at;
  FixedPointSolution& sol = at.sol;
  sol.d = d;
  sol.nodes = lobatto_nodes(q, d);
  std::vector<DenseMatrix> K;
  for (double lam : pb.lambdas) K.push_back(power_weight_operator(sol.nodes, lam));

  sol.y.assign(dim, std::vector<double>(q));
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < q; ++i) sol.y[j][i] = pb.v[j] / pb.lambdas[j];

  std::vector<double> yi(dim), fo(dim), go(dim);
  std::vector<std::vector<double>> src(dim, std::vector<double>(q));
  std::vector<std::vector<double>> next(dim, std::vector<double>(q));
  double prev_delta = 0.0;
  double worst_ratio = 0.0;
  for (int it = 1; it <= pb.max_iterations; ++it) {
    for (std::size_t i = 0; i < q; ++i) {
      const double t = sol.nodes[i];
      for (std::size_t j = 0; j < dim; ++j) yi[j] = sol.y[j][i];
      std::fill(fo.begin(), fo.end(), 0.0);
      std::fill(go.begin(), go.end(), 0.0);
      if (pb.F) pb.F(yi, t, fo);
      if (pb.G) pb.G(yi, t, go);
      for (std::size_t j = 0; j < dim; ++j) {
        src[j][i] = pb.v[j] + t * t * fo[j];
        next[j][i] = t * t * go[j];
      }
    }
    double delta = 0.0, sup = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const std::vector<double> kj = K[j].apply(src[j]);
      for (std::size_t i = 0; i < q; ++i) {
        next[j][i] += kj[i];
        if (!std::isfinite(next[j][i])) return at;
        delta = std::max(delta, std::abs(next[j][i] - sol.y[j][i]));
        sup = std::max(sup, std::abs(next[j][i]));
      }
    }
    sol.y.swap(next);
    sol.iterations = it;
    sol.residual = delta;
    if (it > 1 && prev_delta > 0.0) {
      const double ratio = delta / prev_delta;
      if (it > 3) worst_ratio = std::max(worst_ratio, ratio);
      // Updates have to shrink geometrically once the transient is over.
      if (it > 6 && ratio > 0.95 && delta > pb.tol * std::max(1.0, sup)) return at;
    }
    prev_delta = delta;
    if (delta <= pb.tol * std::max(1.0, sup)) {
      sol.contraction = worst_ratio;
      sol.sup_y = sup;
      at.converged = true;
      return at;
    }
  }
  return at;
}

}  // namespace

double FixedPointSolution::evaluate(std::size_t component, double theta) const {
  if (theta < 0.0 || theta > d * (1.0 + 1e-14)) throw DomainError("evaluation outside [0, d]");
  std::vector<double> row(nodes.size());
  barycentric_row(nodes, std::min(theta, d), row);
  double s = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) s += row[k] * y[component][k];
  return s;
}

FixedPointSolution solve_singular_fixed_point(const FixedPointProblem& pb) {
  if (pb.lambdas.empty() || pb.v.size() != pb.lambdas.size())
    throw DomainError("fixed point: spectrum and forcing sizes differ");
  for (double lam : pb.lambdas)
    if (!(lam > 0.0)) throw DomainError("fixed point: eigenvalues must be positive");
  if (pb.nodes < 4) throw ResolutionError("fixed point: too few nodes");

  double d = pb.d_hint;
  for (int shrink = 0; shrink <= pb.max_shrinks; ++shrink) {
    Attempt at = iterate(pb, d);
    if (at.converged) {
      FixedPointSolution sol = std::move(at.sol);
      sol.shrinks = shrink;
      for (double v : pb.v) sol.sup_v = std::max(sol.sup_v, std::abs(v));
      sol.within_growth_bound = sol.sup_y <= 2.0 * sol.sup_v;
      return sol;
    }
    d *= 0.5;
  }
  throw NoConvergenceError("singular fixed point did not contract after domain shrinking");
}

}  // namespace ipm
