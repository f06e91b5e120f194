#include <cmath>

#include "doctest.h"
#include "ipm/errors.hpp"
#include "ipm/fixed_point.hpp"

using namespace ipm;

TEST_CASE("zero forcing gives v / lambda") {
  FixedPointProblem pb;
  pb.lambdas = {2.0, 4.0, 5.0};
  pb.v = {1.0, -3.0, 0.5};
  const auto s = solve_singular_fixed_point(pb);
  for (std::size_t j = 0; j < 3; ++j)
    for (double t : {0.0, 0.05, 0.13, s.d}) CHECK(std::abs(s.evaluate(j, t) - pb.v[j] / pb.lambdas[j]) <= 1e-14);
  CHECK(s.within_growth_bound);
  CHECK(s.shrinks == 0);
}

TEST_CASE("constant forcing, lambda = 2") {
  FixedPointProblem pb;
  pb.lambdas = {2.0};
  pb.v = {0.0};
  pb.F = [](std::span<const double>, double, std::span<double> out) { out[0] = 1.0; };
  const auto s = solve_singular_fixed_point(pb);
  for (double t : {0.0, 0.03, 0.11, 0.2}) CHECK(std::abs(s.evaluate(0, t) - t * t / 4) <= 1e-14);
}

TEST_CASE("nonlinear scalar problem against its ODE") {
  // y = θ^-3 ∫ φ² (1 + φ² y²) dφ solves θy' + 3y = 1 + θ²y².
  FixedPointProblem pb;
  pb.lambdas = {3.0};
  pb.v = {1.0};
  pb.F = [](std::span<const double> y, double, std::span<double> out) { out[0] = y[0] * y[0]; };
  pb.G = nullptr;
  pb.d_hint = 0.5;
  const auto s = solve_singular_fixed_point(pb);
  CHECK(s.residual <= 1e-12);
  CHECK(s.contraction < 1.0);
  for (double t : {0.1, 0.25, 0.4}) {
    const double h = 1e-5;
    const double dy = (s.evaluate(0, t + h) - s.evaluate(0, t - h)) / (2 * h);
    const double y = s.evaluate(0, t);
    CHECK(std::abs(t * dy + 3 * y - 1 - t * t * y * y) <= 1e-8);
  }
}

TEST_CASE("G term") {
  // y = θ² c + v/λ with G ≡ c.
  FixedPointProblem pb;
  pb.lambdas = {1.0};
  pb.v = {2.0};
  pb.G = [](std::span<const double>, double, std::span<double> out) { out[0] = 0.7; };
  const auto s = solve_singular_fixed_point(pb);
  for (double t : {0.0, 0.1, 0.2}) CHECK(std::abs(s.evaluate(0, t) - (2.0 + 0.7 * t * t)) <= 1e-13);
}

TEST_CASE("non-contracting map shrinks the domain, then gives up") {
  FixedPointProblem pb;
  pb.lambdas = {1.0};
  pb.v = {1.0};
  pb.d_hint = 4.0;
  pb.F = [](std::span<const double> y, double, std::span<double> out) { out[0] = 3.0 * y[0]; };
  const auto s = solve_singular_fixed_point(pb);
  CHECK(s.shrinks > 0);
  CHECK(s.d < 4.0);

  FixedPointProblem bad;
  bad.lambdas = {1.0};
  bad.v = {1.0};
  bad.max_shrinks = 2;
  bad.F = [](std::span<const double> y, double t, std::span<double> out) {
    out[0] = 1e6 * y[0] / (t * t + 1e-300) * (t > 0 ? 1.0 : 0.0);
  };
  CHECK_THROWS_AS(solve_singular_fixed_point(bad), NoConvergenceError);
  FixedPointProblem neg;
  neg.lambdas = {-1.0};
  neg.v = {1.0};
  CHECK_THROWS_AS(solve_singular_fixed_point(neg), DomainError);
}
