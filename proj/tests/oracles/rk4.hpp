#pragma once

// Fixed-step classical Runge-Kutta, kept deliberately independent of the
// library's integrators so it can serve as an oracle.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> rk4_integrate(const std::function<State<N>(double, const State<N>&)>& f, State<N> y,
                       double t0, double t1, std::size_t steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  double t = t0;
  for (std::size_t s = 0; s < steps; ++s) {
    const State<N> k1 = f(t, y);
    State<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const State<N> k2 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const State<N> k3 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    const State<N> k4 = f(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t = t0 + static_cast<double>(s + 1) * h;
  }
  return y;
}

// Solves G'' + 4G = src(θ) from θ = 0 with G(0) = 0, G'(0) = slope; returns G(θ_end).
inline State<2> linear_stream(const std::function<double(double)>& src, double slope,
                              double theta_end, std::size_t steps = 20000) {
  std::function<State<2>(double, const State<2>&)> f = [&](double t, const State<2>& y) {
    return State<2>{y[1], src(t) - 4.0 * y[0]};
  };
  return rk4_integrate<2>(f, State<2>{0.0, slope}, 0.0, theta_end, steps);
}

}  // namespace oracle
