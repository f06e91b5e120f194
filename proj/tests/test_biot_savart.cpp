#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ipm/biot_savart.hpp"
#include "ipm/errors.hpp"
#include "oracles/rk4.hpp"

using namespace ipm;

namespace {

double max_abs_diff(const GridFunction& f, const std::function<double(double)>& g) {
  double e = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f[i] - g(f.theta(i))));
  return e;
}

GridFunction remove_jet(const GridFunction& f) {
  const TaylorJet j = taylor_jet(f, 2);
  return f - GridFunction::sample(
                 f.grid, [&](double t) { return j.values[0] + 0.5 * j.values[2] * t * t; },
                 Parity::even);
}

}  // namespace

TEST_CASE("IVP reproduces the trivial stream function") {
  auto g = AngularGrid::clustered(1.5, 64);
  auto M = GridFunction::sample(g, [](double) { return 4.0; }, Parity::even);
  auto s = solve_ivp(M);
  CHECK(s.variant == StreamVariant::ivp);
  CHECK(max_abs_diff(s.G, [](double t) { return 0.5 * std::sin(2 * t); }) <= 1e-10);
  CHECK(s.Gp[0] == 1.0);
  CHECK(s.G[0] == 0.0);
}

TEST_CASE("IVP matches an independent ODE integration") {
  auto g = AngularGrid::clustered(1.2, 64);
  auto M = GridFunction::sample(g, [](double t) { return 4.0 - t * t; }, Parity::even);
  auto s = solve_ivp(M);
  auto src = [](double t) { return -2.0 * t * std::cos(t) * std::cos(t); };
  for (double t : {0.3, 0.7, 1.2}) {
    const auto y = oracle::linear_stream(src, 1.0, t);
    CHECK(std::abs(interpolate(s.G, t) - y[0]) <= 1e-8);
    CHECK(std::abs(interpolate(s.Gp, t) - y[1]) <= 1e-8);
  }
}

TEST_CASE("BVP") {
  auto g = AngularGrid::clustered(1.0, 64);
  auto c = GridFunction::sample(g, [](double) { return 2.5; }, Parity::even);
  CHECK(solve_bvp(c).G.max_abs() <= 1e-12);
  CHECK(solve_bvp(c, BvpForm::derivative).G.max_abs() <= 1e-12);

  // Linear shooting on G'(0): G = G0 + s G1 with G(L) = 0.
  auto M = GridFunction::sample(g, [](double t) { return std::cos(2 * t); }, Parity::even);
  auto src = [](double t) { return -2.0 * std::sin(2 * t) * std::cos(t) * std::cos(t); };
  const double L = 1.0;
  const double g0 = oracle::linear_stream(src, 0.0, L)[0];
  const double g1 = oracle::linear_stream([](double) { return 0.0; }, 1.0, L)[0];
  const double slope = -g0 / g1;
  for (auto form : {BvpForm::integrated_by_parts, BvpForm::derivative}) {
    auto s = solve_bvp(M, form);
    CHECK(std::abs(s.Gp[0] - slope) <= 1e-9);
    for (double t : {0.25, 0.5, 0.9}) {
      const auto y = oracle::linear_stream(src, slope, t);
      CHECK(std::abs(interpolate(s.G, t) - y[0]) <= 1e-9);
    }
    CHECK(s.G[0] == 0.0);
    CHECK(s.G[g->n() - 1] == 0.0);
  }
  auto odd = GridFunction::sample(g, [](double t) { return t; }, Parity::odd);
  CHECK_THROWS_AS(solve_bvp(odd), ParityError);
}

TEST_CASE("localized stream function") {
  auto g = AngularGrid::clustered(1.1, 64);
  auto wp = WeightParams::linked(1.1);
  auto zero = GridFunction::zeros(g, Parity::even);
  auto z = solve_localized(zero, wp);
  CHECK(z.local.G.max_abs() == 0.0);
  CHECK(z.corrected.G.max_abs() == 0.0);

  auto q = GridFunction::sample(g, [](double t) { return std::pow(t, 4); }, Parity::even);
  for (auto bump : {BumpProfile::cubic, BumpProfile::smooth}) {
    auto s = solve_localized(q, wp, bump);
    CHECK(std::abs(s.local.G[0]) <= 1e-10);
    CHECK(std::abs(s.local.Gp[0]) <= 1e-10);
    CHECK(std::abs(s.corrected.G[g->n() - 1]) <= 1e-10);
    CHECK(std::abs(interpolate(s.corrected.G, 1.1 - 1e-6)) <= 1e-5);
  }
  auto bad = GridFunction::sample(g, [](double t) { return 1.0 + std::pow(t, 4); }, Parity::even);
  CHECK_THROWS_AS(solve_localized(bad, wp), PreconditionError);

  for (double t : g->nodes()) {
    const double k1 = kernel::K1(t), k2 = kernel::K2(t);
    const double c = std::cos(t);
    CHECK(std::abs(k1 * k1 + k2 * k2 - (4 * std::pow(c, 4) + std::pow(std::sin(2 * t), 2))) <=
          1e-14);
    CHECK(k1 * k1 + k2 * k2 <= 4.0 + 1e-14);
  }
}

TEST_CASE("bump profiles") {
  for (auto p : {BumpProfile::cubic, BumpProfile::smooth}) {
    CHECK(bump_eta(0.25, p) == 1.0);
    CHECK(bump_eta(2.0, p) == 0.0);
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = bump_eta(0.5 + 0.5 * i / 1000.0, p);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
  double slope = 0.0, slope_smooth = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = 0.5 + 0.5 * i / 10000.0;
    slope = std::max(slope, std::abs(bump_eta_derivative(x, BumpProfile::cubic)));
    slope_smooth = std::max(slope_smooth, std::abs(bump_eta_derivative(x, BumpProfile::smooth)));
    // Derivative agrees with a centred difference.
    if (i > 0 && i < 10000) {
      const double h = 1e-6;
      const double fd =
          (bump_eta(x + h, BumpProfile::smooth) - bump_eta(x - h, BumpProfile::smooth)) / (2 * h);
      CHECK(std::abs(fd - bump_eta_derivative(x, BumpProfile::smooth)) <= 1e-6);
    }
  }
  CHECK(slope <= 3.0 + 1e-9);
  MESSAGE("max |eta'| smooth profile: " << slope_smooth);
}

TEST_CASE("residuals of all variants on a smooth suite at n = 256") {
  auto g = AngularGrid::clustered(1.1, 256);
  auto wp = WeightParams::linked(1.1);
  std::vector<std::function<double(double)>> suite{
      [](double t) { return 4.0 - t * t; },
      [](double t) { return std::cos(2 * t); },
      [](double t) { return std::exp(-t * t) * (1 + t * t); },
      [](double t) { return 1.0 / (1.0 + std::pow(std::sin(t), 2)); },
  };
  for (const auto& fn : suite) {
    auto M = GridFunction::sample(g, fn, Parity::even);
    auto Mt = remove_jet(M);
    const double r_ivp = stream_residual(solve_ivp(M), M).max_abs();
    const double r_bvp = stream_residual(solve_bvp(M), M).max_abs();
    const double r_bvp_d = stream_residual(solve_bvp(M, BvpForm::derivative), M).max_abs();
    const double r_loc = stream_residual(solve_localized(Mt, wp).local, Mt).max_abs();
    CHECK(r_ivp <= 1e-7);
    CHECK(r_bvp <= 1e-7);
    CHECK(r_bvp_d <= 1e-7);
    CHECK(r_loc <= 1e-7);

    // G' from the closed form equals the grid derivative of G.
    auto s = solve_bvp(M);
    auto dG = differentiate(s.G, 1);
    double e = 0.0;
    for (std::size_t i = 0; i < dG.size(); ++i) e = std::max(e, std::abs(dG[i] - s.Gp[i]));
    CHECK(e <= 1e-8);
  }
}

TEST_CASE("degenerate domain") {
  auto g = AngularGrid::clustered(std::numbers::pi / 4, 32);
  auto M = GridFunction::sample(g, [](double t) { return std::pow(t, 4); }, Parity::even);
  CHECK_THROWS_AS(solve_localized(M, WeightParams::linked(std::numbers::pi / 4)),
                  DegenerateDomainError);
}
