#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ipm/angular_grid.hpp"
#include "ipm/errors.hpp"

using namespace ipm;

namespace {

double max_err(const GridFunction& f, const std::function<double(double)>& exact,
               double theta_max = 1e9) {
  double e = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.theta(i) <= theta_max) e = std::max(e, std::abs(f[i] - exact(f.theta(i))));
  return e;
}

}  // namespace

TEST_CASE("grid invariants") {
  for (auto kind : {GridKind::clustered, GridKind::uniform}) {
    auto g = kind == GridKind::clustered ? AngularGrid::clustered(1.1, 40)
                                         : AngularGrid::uniform(1.1, 40);
    CHECK(g->node(0) == 0.0);
    CHECK(g->node(g->n() - 1) == 1.1);
    for (std::size_t i = 1; i < g->n(); ++i) CHECK(g->node(i) > g->node(i - 1));
    double s = 0.0;
    for (double w : g->quad_weights()) s += w;
    CHECK(std::abs(s - 1.1) / 1.1 <= 1e-12);
  }
  CHECK_THROWS_AS(AngularGrid::clustered(1.6, 16), DomainError);
  CHECK_THROWS_AS(AngularGrid::clustered(1.0, 2), ResolutionError);
}

TEST_CASE("spectral differentiation on the clustered grid") {
  auto g = AngularGrid::clustered(1.2, 64);
  auto f = GridFunction::sample(g, [](double t) { return std::sin(2 * t); }, Parity::odd);
  auto df = differentiate(f, 1);
  CHECK(df.parity == Parity::even);
  CHECK(max_err(df, [](double t) { return 2 * std::cos(2 * t); }) <= 1e-9);

  // Endpoint rows of spectral D^4 amplify rounding like n^8; keep n modest.
  auto g8 = AngularGrid::clustered(1.2, 8);
  auto q = GridFunction::sample(g8, [](double t) { return std::pow(t, 4); }, Parity::even);
  auto d4 = differentiate(q, 4);
  CHECK(max_err(d4, [](double) { return 24.0; }) <= 1e-8);

  // Folded grid of n nodes carries polynomials of degree 2n-2; check n-2.
  const std::size_t n = 24;
  auto gp = AngularGrid::clustered(1.0, n);
  auto p = GridFunction::sample(gp, [&](double t) { return std::pow(t, n - 2); }, Parity::even);
  auto dp = differentiate(p, 1);
  const double scale = static_cast<double>(n - 2);
  CHECK(max_err(dp, [&](double t) { return scale * std::pow(t, n - 3); }) <= 1e-9 * scale);

  // Odd-order derivatives of even functions vanish at 0 exactly.
  auto c = GridFunction::sample(g, [](double t) { return std::cos(3 * t); }, Parity::even);
  CHECK(differentiate(c, 1)[0] == 0.0);
  CHECK(differentiate(c, 3)[0] == 0.0);
  CHECK(differentiate(c, 5)[0] == 0.0);
  CHECK_THROWS_AS(differentiate(c, 6), UnsupportedOrderError);
}

TEST_CASE("integration") {
  auto g = AngularGrid::clustered(1.2, 32);
  auto cube = GridFunction::sample(g, [](double t) { return t * t * t; }, Parity::odd);
  CHECK(std::abs(integrate(cube, 0.0, 1.0) - 0.25) <= 1e-10);
  auto one = GridFunction::sample(g, [](double) { return 1.0; }, Parity::even);
  CHECK(std::abs(integrate(one, 0.0, 1.2) - 1.2) <= 1e-12);
  CHECK_THROWS_AS(integrate(one, 0.5, 0.4), DomainError);

  // Richardson-style cross-check: n and 2n agree, and both match the closed form.
  auto kern = [](double t) { return std::cos(t) * std::cos(t) * std::sin(2 * t); };
  auto g1 = AngularGrid::clustered(1.2, 40);
  auto g2 = AngularGrid::clustered(1.2, 80);
  const double v1 = integrate(GridFunction::sample(g1, kern, Parity::odd), 0.0, 1.0);
  const double v2 = integrate(GridFunction::sample(g2, kern, Parity::odd), 0.0, 1.0);
  CHECK(std::abs(v1 - v2) <= 1e-10);
  CHECK(std::abs(v2 - 0.5 * (1 - std::pow(std::cos(1.0), 4))) <= 1e-12);

  // Super-algebraic convergence of the clustered quadrature.
  const double L = 1.3;
  const double exact = 0.5 * (1 - std::cos(2 * L));
  std::vector<double> errs;
  for (std::size_t n : {5u, 9u, 17u}) {
    auto gn = AngularGrid::clustered(L, n);
    auto f = GridFunction::sample(gn, [](double t) { return std::sin(2 * t); }, Parity::odd);
    errs.push_back(std::abs(integrate(f, 0.0, L) - exact) + 1e-300);
  }
  CHECK(errs[1] < 1e-3 * errs[0]);
  CHECK(errs[2] <= 1e-13);
}

TEST_CASE("differentiate after integrate reproduces even functions") {
  auto g = AngularGrid::clustered(1.0, 48);
  auto f = GridFunction::sample(g, [](double t) { return std::exp(-t * t) * std::cos(t); },
                                Parity::even);
  auto back = differentiate(integrate_indefinite(f), 1);
  CHECK(back.parity == Parity::even);
  double e = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(back[i] - f[i]));
  CHECK(e <= 1e-11);
}

TEST_CASE("taylor jets") {
  auto g = AngularGrid::clustered(1.0, 32);
  auto f = GridFunction::sample(g, [](double t) { return 3 + t * t; }, Parity::even);
  auto jet = taylor_jet(f, 2);
  CHECK(jet.values[0] == doctest::Approx(3).epsilon(1e-12));
  CHECK(jet.values[1] == 0.0);
  CHECK(jet.values[2] == doctest::Approx(2).epsilon(1e-10));

  auto c = GridFunction::sample(g, [](double t) { return std::cos(t); }, Parity::even);
  auto jc = taylor_jet(c, 4);
  const double expect[] = {1, 0, -1, 0, 1};
  for (int k = 0; k <= 4; ++k) CHECK(std::abs(jc.values[k] - expect[k]) <= 1e-8);
  CHECK(jc.values[1] == 0.0);
  CHECK(jc.values[3] == 0.0);
  CHECK(jc.condition > 1.0);

  auto p2 = GridFunction::sample(
      g, [&](double t) { return jc.values[0] + 0.5 * jc.values[2] * t * t; }, Parity::even);
  auto rem = taylor_jet(c - p2, 2);
  for (double v : rem.values) CHECK(std::abs(v) <= 1e-8);
}

TEST_CASE("interpolation") {
  auto g = AngularGrid::clustered(1.1, 40);
  auto f = GridFunction::sample(g, [](double t) { return std::sin(3 * t); }, Parity::odd);
  for (double t : {0.0, 0.013, 0.5, 1.0, 1.1})
    CHECK(std::abs(interpolate(f, t) - std::sin(3 * t)) <= 1e-12);
}

TEST_CASE("uniform grid finite differences") {
  auto exact_d = [](double t) { return -2 * std::sin(2 * t); };
  std::vector<double> errs;
  for (std::size_t n : {64u, 128u}) {
    auto g = AngularGrid::uniform(1.1, n);
    auto f = GridFunction::sample(g, [](double t) { return std::cos(2 * t); }, Parity::even);
    auto df = differentiate(f, 1);
    CHECK(df[0] == 0.0);
    errs.push_back(max_err(df, exact_d));
  }
  // Fourth order: doubling n cuts the error by about 16.
  CHECK(errs[1] < errs[0] / 10.0);
  CHECK(errs[1] < 1e-7);

  auto g = AngularGrid::uniform(1.1, 128);
  auto f = GridFunction::sample(g, [](double t) { return std::cos(2 * t); }, Parity::even);
  CHECK(max_err(differentiate(f, 4), [](double t) { return 16 * std::cos(2 * t); }) < 1e-3);
  CHECK(std::abs(integrate(f, 0.0, 1.1) - 0.5 * std::sin(2.2)) < 1e-10);
  CHECK(std::abs(integrate(f, 0.123, 0.777) - 0.5 * (std::sin(1.554) - std::sin(0.246))) <
        1e-10);
  CHECK(std::abs(interpolate(f, 0.3333) - std::cos(0.6666)) < 1e-10);
}

TEST_CASE("fornberg weights reproduce the central second difference") {
  std::vector<double> x{-1, 0, 1};
  auto w = fornberg_weights(0.0, x, 2);
  CHECK(w[2][0] == doctest::Approx(1));
  CHECK(w[2][1] == doctest::Approx(-2));
  CHECK(w[2][2] == doctest::Approx(1));
  CHECK(w[1][0] == doctest::Approx(-0.5));
}

TEST_CASE("upwind-biased first derivative") {
  auto g = AngularGrid::uniform(1.1, 96);
  auto quartic = GridFunction::sample(
      g, [](double t) { return 1 + t * t - 0.5 * std::pow(t, 4); }, Parity::even);
  const std::vector<double> pos(g->n(), 1.0), neg(g->n(), -1.0);
  auto exact = [](double t) { return 2 * t - 2 * std::pow(t, 3); };
  CHECK(max_err(differentiate_upwind(quartic, pos), exact) < 1e-10);
  CHECK(max_err(differentiate_upwind(quartic, neg), exact) < 1e-10);
  CHECK(differentiate_upwind(quartic, pos)[0] == 0.0);

  std::vector<double> errs;
  for (std::size_t n : {64u, 128u}) {
    auto gn = AngularGrid::uniform(1.1, n);
    auto f = GridFunction::sample(gn, [](double t) { return std::cos(2 * t); }, Parity::even);
    errs.push_back(max_err(differentiate_upwind(f, std::vector<double>(n, 1.0)),
                           [](double t) { return -2 * std::sin(2 * t); }));
  }
  CHECK(errs[1] < errs[0] / 10.0);

  // Interior symbol: Re Σ w_k e^{ikξ} ≥ 0, so −v·D damps every Fourier mode for v > 0.
  const DenseMatrix& D = g->upwind_derivative_matrix(Parity::even, +1);
  const std::size_t j = 40;
  const double h = g->node(1) - g->node(0);
  double worst = 1.0;
  for (int m = 0; m <= 200; ++m) {
    const double xi = std::numbers::pi * m / 200.0;
    double re = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i)
      re += D(j, i) * h * std::cos(xi * (static_cast<double>(i) - static_cast<double>(j)));
    worst = std::min(worst, re);
  }
  CHECK(worst >= -1e-12);

  auto c = AngularGrid::clustered(1.1, 32);
  CHECK(&c->upwind_derivative_matrix(Parity::even, 1) == &c->derivative_matrix(1, Parity::even));
  CHECK_THROWS_AS(differentiate_upwind(quartic, std::vector<double>(3, 1.0)), DomainError);
}

TEST_CASE("pointwise derivative rows") {
  for (auto g : {AngularGrid::clustered(1.1, 96), AngularGrid::uniform(1.1, 256)}) {
    auto f = GridFunction::sample(g, [](double t) { return std::cos(2 * t); }, Parity::even);
    const double tol = g->kind() == GridKind::clustered ? 1e-7 : 1e-4;
    for (double t : {0.0, 0.137, 0.5, 0.9}) {
      for (int k = 0; k <= 4; ++k) {
        const auto row = g->derivative_row(t, k, Parity::even);
        double v = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * f[i];
        const double exact = std::pow(2.0, k) * std::cos(2 * t + 0.5 * k * std::numbers::pi);
        CHECK(std::abs(v - exact) <= tol * std::pow(2.0, k));
      }
    }
    const std::vector<double> ts{0.2, 0.4}, ws{0.25, -1.5};
    const auto batch = g->derivative_row(ts, ws, 3, Parity::even);
    const auto r0 = g->derivative_row(0.2, 3, Parity::even);
    const auto r1 = g->derivative_row(0.4, 3, Parity::even);
    double e = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      e = std::max(e, std::abs(batch[i] - (0.25 * r0[i] - 1.5 * r1[i])));
      scale = std::max(scale, std::abs(r1[i]));
    }
    CHECK(e <= 1e-14 * scale * static_cast<double>(batch.size()));
    CHECK_THROWS_AS(g->derivative_row(1.2, 1, Parity::even), DomainError);
  }
}
