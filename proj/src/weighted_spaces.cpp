#include "ipm/weighted_spaces.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "ipm/biot_savart.hpp"
#include "ipm/errors.hpp"
#include "ipm/quadrature.hpp"

namespace ipm {
namespace {

constexpr double kWeightFloor = 1e-30;
constexpr int kPanelPoints = 12;

void require_even(const GridFunction& f) {
  if (f.parity != Parity::even) throw ParityError("weighted norms act on even functions");
}

struct Point {
  double theta, w;
};

void add_panels(std::vector<Point>& pts, double a, double b, int panels) {
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    const QuadratureRule r = gauss_legendre(kPanelPoints, lo, hi);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) pts.push_back({r.nodes[i], r.weights[i]});
  }
}

}  // namespace

double weight_phi(double t, const WeightParams& wp) {
  if (!(t > 0.0) || t > wp.L) throw DomainError("phi is defined on (0, L]");
  const double base = std::pow(wp.l1, -8.0);
  if (t <= wp.l1) return std::pow(t, -8.0);
  if (t <= wp.l2) return base * std::exp(-wp.K * std::log(t / wp.l1));
  return base * std::exp(-wp.K * std::log(wp.l2 / wp.l1));
}

double weight_psi(double t, const WeightParams& wp) {
  if (t < 0.0 || t > wp.L) throw DomainError("psi is defined on [0, L]");
  if (t <= wp.l1) return 1.0;
  if (t <= wp.l2) return std::exp(-wp.K * std::log(t / wp.l1));
  return std::exp(-wp.K * std::log(wp.l2 / wp.l1)) * std::pow((wp.L - t) / (wp.L - wp.l2), 6.5);
}

GridFunction taylor_part(const GridFunction& f) {
  require_even(f);
  const TaylorJet j = taylor_jet(f, 2);
  const double c0 = j.values[0], c2 = j.values[2];
  return GridFunction::sample(f.grid, [&](double t) { return c0 + 0.5 * c2 * t * t; },
                              Parity::even);
}

H4TildeForm::H4TildeForm(GridPtr grid, const WeightParams& wp) : grid_(std::move(grid)), wp_(wp) {
  wp_.validate();
  if (std::abs(wp_.L - grid_->L()) > 1e-12 * wp_.L)
    throw DomainError("weight parameters built for another L");
  const AngularGrid& g = *grid_;
  const std::size_t n = g.n();
  const DenseMatrix& D2 = g.derivative_matrix(2, Parity::even);

  // Quadrature points: (0, ℓ₁], geometric panels on [ℓ₁, ℓ₂] until the weights
  // are negligible, and [ℓ₂, L] when it still matters.
  std::vector<Point> near, far;
  add_panels(near, 0.0, wp_.l1, 8);
  const double rho = std::min(0.05, 4.0 / wp_.K);
  const double cut = wp_.l1 * std::exp(-std::log(kWeightFloor) / wp_.K);
  double a = wp_.l1;
  while (a < wp_.l2 && a < cut) {
    const double b = std::min({a * (1.0 + rho), wp_.l2, cut});
    add_panels(far, a, b, 1);
    a = b;
  }
  const bool tail = std::exp(-wp_.K * std::log(wp_.l2 / wp_.l1)) >= kWeightFloor;
  if (tail) add_panels(far, wp_.l2, wp_.L, 8);
  window_ = far.empty() ? wp_.l1 : far.back().theta;

  const QuadratureRule inner = gauss_legendre(16, 0.0, 1.0);
  const std::size_t rows = 2 + 2 * (near.size() + far.size());
  R_ = DenseMatrix(rows, n);
  R_(0, 0) = 1.0;
  std::vector<double> d2row(n);
  for (std::size_t j = 0; j < n; ++j) R_(1, j) = d2row[j] = D2(0, j);

  std::size_t r = 2;
  phi_begin_ = r;
  // Near zero: (f − ℙ₂f)/θ⁴ = (1/6)∫_0^1 (1−s)³ f⁽⁴⁾(θs) ds, and θ⁸φ = 1.
  for (const Point& p : near) {
    std::vector<double> ts, cs;
    for (std::size_t k = 0; k < inner.nodes.size(); ++k) {
      const double s = inner.nodes[k];
      ts.push_back(p.theta * s);
      cs.push_back(inner.weights[k] * std::pow(1.0 - s, 3) / 6.0);
    }
    const auto rr = g.derivative_row(ts, cs, 4, Parity::even);
    const double sc = std::sqrt(wp_.B * p.w);
    for (std::size_t j = 0; j < n; ++j) R_(r, j) = sc * rr[j];
    ++r;
  }
  phi_near_end_ = r;
  for (const Point& p : far) {
    auto row = g.interpolation_row(p.theta, Parity::even);
    row[0] -= 1.0;
    for (std::size_t j = 0; j < n; ++j) row[j] -= 0.5 * p.theta * p.theta * d2row[j];
    const double sc = std::sqrt(wp_.B * p.w * weight_phi(p.theta, wp_));
    for (std::size_t j = 0; j < n; ++j) R_(r, j) = sc * row[j];
    ++r;
  }
  phi_end_ = r;
  for (const auto* pts : {&near, &far}) {
    for (const Point& p : *pts) {
      const auto rr = g.derivative_row(p.theta, 4, Parity::even);
      const double sc = std::sqrt(p.w * weight_psi(p.theta, wp_));
      for (std::size_t j = 0; j < n; ++j) R_(r, j) = sc * rr[j];
      ++r;
    }
    if (pts == &near) psi_near_end_ = r;
  }
}

std::array<double, 4> H4TildeForm::pieces(const GridFunction& f, const GridFunction& g) const {
  require_even(f);
  require_even(g);
  const auto Rf = R_.apply(f.values);
  const auto Rg = R_.apply(g.values);
  std::array<double, 4> out{Rf[0] * Rg[0], Rf[1] * Rg[1], 0.0, 0.0};
  for (std::size_t i = phi_begin_; i < phi_end_; ++i) out[2] += Rf[i] * Rg[i];
  for (std::size_t i = phi_end_; i < Rf.size(); ++i) out[3] += Rf[i] * Rg[i];
  return out;
}

GridFunction H4TildeForm::localize(const GridFunction& g) const {
  require_even(g);
  const double end = 0.95 * wp_.L;
  if (window_ >= end) return g;
  const double width = end - window_;
  GridFunction out = g;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= bump_eta(0.5 + 0.5 * (out.theta(i) - window_) / width, BumpProfile::smooth);
  return out;
}

double H4TildeForm::inner(const GridFunction& f, const GridFunction& g) const {
  const auto p = pieces(f, g);
  return p[0] + p[1] + p[2] + p[3];
}

std::pair<double, double> H4TildeForm::hardy_sides(const GridFunction& f) const {
  require_even(f);
  const auto Rf = R_.apply(f.values);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = phi_begin_; i < phi_near_end_; ++i) lhs += Rf[i] * Rf[i];
  for (std::size_t i = phi_end_; i < psi_near_end_; ++i) rhs += Rf[i] * Rf[i];
  return {lhs / wp_.B, rhs};
}

DenseMatrix H4TildeForm::gram() const { return R_.transpose() * R_; }

double h4tilde_inner(const GridFunction& f, const GridFunction& g, const WeightParams& wp) {
  return H4TildeForm(f.grid, wp).inner(f, g);
}

H4Form::H4Form(GridPtr grid) : grid_(std::move(grid)) {
  const AngularGrid& g = *grid_;
  const std::size_t n = g.n();
  const double L = g.L();
  std::vector<Point> pts;
  add_panels(pts, 0.0, L, 16);
  R_ = DenseMatrix(2 * pts.size(), n);
  std::size_t r = 0;
  for (const Point& p : pts) {
    const auto row = g.interpolation_row(p.theta, Parity::even);
    const double sc = std::sqrt(p.w);
    for (std::size_t j = 0; j < n; ++j) R_(r, j) = sc * row[j];
    ++r;
    const auto rr = g.derivative_row(p.theta, 4, Parity::even);
    const double s4 = std::sqrt(p.w * std::pow(L - p.theta, 6.5));
    for (std::size_t j = 0; j < n; ++j) R_(r, j) = s4 * rr[j];
    ++r;
  }
}

double H4Form::inner(const GridFunction& f, const GridFunction& g) const {
  require_even(f);
  require_even(g);
  const auto a = R_.apply(f.values);
  const auto b = R_.apply(g.values);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double H4Form::norm(const GridFunction& f) const { return std::sqrt(inner(f, f)); }

NormReport norms(const GridFunction& f, const WeightParams& wp) {
  const H4TildeForm form(f.grid, wp);
  NormReport rep;
  rep.pieces = form.pieces(f, f);
  double s = 0.0;
  for (double v : rep.pieces) s += v;
  rep.h4tilde = std::sqrt(s);
  rep.h4 = H4Form(f.grid).norm(f);
  return rep;
}

std::vector<GridFunction> random_even_samples(const GridPtr& grid, std::size_t count,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int modes = 6;
  const double L = grid->L();
  std::vector<GridFunction> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double c0 = normal(rng), c2 = normal(rng);
    std::array<double, modes> a{};
    for (int k = 0; k < modes; ++k) a[k] = normal(rng) / ((1.0 + k) * (1.0 + k));
    out.push_back(GridFunction::sample(
        grid,
        [&](double t) {
          double r = 0.0;
          for (int k = 0; k < modes; ++k) r += a[k] * std::cos(k * std::numbers::pi * t / L);
          return c0 + c2 * t * t + std::pow(t, 4) * r;
        },
        Parity::even));
  }
  return out;
}

std::vector<GridFunction> sample_basis(const GridPtr& grid, std::size_t modes) {
  const double L = grid->L();
  std::vector<GridFunction> out;
  out.push_back(GridFunction::sample(grid, [](double) { return 1.0; }, Parity::even));
  out.push_back(GridFunction::sample(grid, [](double t) { return t * t; }, Parity::even));
  for (std::size_t k = 0; k < modes; ++k)
    out.push_back(GridFunction::sample(
        grid, [&](double t) { return std::pow(t, 4) * std::cos(k * std::numbers::pi * t / L); },
        Parity::even));
  return out;
}

namespace {

// ∫_a^b w(θ) h(θ)² with h interpolated from nodal values.
double weighted_square(const GridFunction& h, double a, double b,
                       const std::function<double(double)>& w) {
  std::vector<Point> pts;
  add_panels(pts, a, b, 8);
  double s = 0.0;
  for (const Point& p : pts) {
    const double v = interpolate(h, p.theta);
    s += p.w * w(p.theta) * v * v;
  }
  return s;
}

}  // namespace

InequalityReport verify_inequalities(const std::vector<GridFunction>& samples,
                                     const WeightParams& wp) {
  InequalityReport rep;
  rep.samples = samples.size();
  rep.hardy_bound = std::pow(2.0 / 7.0 * 2.0 / 5.0 * 2.0 / 3.0 * 2.0, 2);
  if (samples.empty()) return rep;
  const GridPtr grid = samples.front().grid;
  const H4TildeForm tilde(grid, wp);
  const H4Form h4(grid);
  const double L = wp.L;
  std::vector<double> h4n;
  for (const GridFunction& f : samples) {
    const double nt = std::sqrt(tilde.inner(f, f));
    const double n4 = h4.norm(f);
    h4n.push_back(n4);
    rep.equivalence_upper = std::max(rep.equivalence_upper, nt / n4);
    rep.equivalence_lower = std::max(rep.equivalence_lower, n4 / nt);

    const GridFunction rem = f - taylor_part(f);
    const auto [hl, hr] = tilde.hardy_sides(rem);
    if (hr > 0.0) rep.hardy = std::max(rep.hardy, hl / hr);

    const double f2 = weighted_square(f, wp.l2, L, [](double) { return 1.0; });
    for (int k = 1; k <= 3; ++k) {
      const double p = 0.5 + 2.0 * (k - 1);
      const GridFunction dk = differentiate(f, k);
      const GridFunction dk1 = differentiate(f, k + 1);
      const double lhs = weighted_square(dk, wp.l2, L, [&](double t) { return std::pow(L - t, p); });
      const double rhs =
          f2 + weighted_square(dk1, wp.l2, L, [&](double t) { return std::pow(L - t, p + 2); });
      if (rhs > 0.0) rep.interpolation[k - 1] = std::max(rep.interpolation[k - 1], lhs / rhs);
    }
    for (int j = 0; j <= 3; ++j) {
      const GridFunction dj = j == 0 ? f : differentiate(f, j);
      double sup = 0.0;
      for (std::size_t i = 0; i < dj.size(); ++i)
        sup = std::max(sup, std::abs(std::pow(L - dj.theta(i), j) * dj[i]));
      rep.embedding[j] = std::max(rep.embedding[j], sup / n4);
    }
  }
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const GridFunction fg = samples[i] * samples[i + 1];
    rep.algebra = std::max(rep.algebra, h4.norm(fg) / (h4n[i] * h4n[i + 1]));
  }
  return rep;
}

}  // namespace ipm
