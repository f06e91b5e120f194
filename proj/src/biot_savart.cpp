#include "ipm/biot_savart.hpp"

#include <cmath>
#include <numbers>

#include "ipm/errors.hpp"

namespace ipm {

namespace kernel {
double k1(double t) {
  const double c = std::cos(t);
  return c * c * std::cos(2 * t);
}
double k2(double t) {
  const double c = std::cos(t);
  return c * c * std::sin(2 * t);
}
double K1(double t) {
  const double c = std::cos(t), s2 = std::sin(2 * t);
  return 2 * c * c * std::cos(2 * t) - s2 * s2;
}
double K2(double t) {
  const double c = std::cos(t), s2 = std::sin(2 * t);
  return s2 * std::cos(2 * t) + 2 * c * c * s2;
}
}  // namespace kernel

namespace {

void require_even(const GridFunction& M) {
  if (M.parity != Parity::even) throw ParityError("Biot-Savart source density must be even");
}

struct Kernels {
  std::vector<double> k1, k2, K1, K2, s, c, cos2;
};

Kernels sample_kernels(const AngularGrid& g) {
  Kernels k;
  const std::size_t n = g.n();
  for (auto* v : {&k.k1, &k.k2, &k.K1, &k.K2, &k.s, &k.c, &k.cos2}) v->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = g.node(i);
    k.k1[i] = kernel::k1(t);
    k.k2[i] = kernel::k2(t);
    k.K1[i] = kernel::K1(t);
    k.K2[i] = kernel::K2(t);
    k.s[i] = std::sin(2 * t);
    k.c[i] = std::cos(2 * t);
    const double ct = std::cos(t);
    k.cos2[i] = ct * ct;
  }
  return k;
}

GridFunction cumulative(const GridFunction& f) { return integrate_indefinite(f); }

GridFunction times(const GridFunction& f, const std::vector<double>& w, Parity wp) {
  GridFunction out(f.grid, f.values, f.parity == wp ? Parity::even : Parity::odd);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= w[i];
  return out;
}

}  // namespace

StreamSolution solve_ivp(const GridFunction& M) {
  require_even(M);
  const auto& g = *M.grid;
  const Kernels k = sample_kernels(g);
  const GridFunction JK2 = cumulative(times(M, k.K2, Parity::odd));   // even
  const GridFunction JK1 = cumulative(times(M, k.K1, Parity::even));  // odd
  const std::size_t n = g.n();
  StreamSolution out;
  out.variant = StreamVariant::ivp;
  out.I1 = GridFunction::zeros(M.grid, Parity::even);
  out.I2 = GridFunction::zeros(M.grid, Parity::odd);
  out.G = GridFunction::zeros(M.grid, Parity::odd);
  out.Gp = GridFunction::zeros(M.grid, Parity::even);
  for (std::size_t i = 0; i < n; ++i) {
    const double I1 = M[i] * k.k1[i] - M[0] + JK2[i];
    const double I2 = M[i] * k.k2[i] - JK1[i];
    out.I1[i] = I1;
    out.I2[i] = I2;
    out.G[i] = 0.5 * k.s[i] * (1.0 + I1) - 0.5 * k.c[i] * I2;
    out.Gp[i] = k.c[i] * (1.0 + I1) + k.s[i] * I2;
  }
  out.G[0] = 0.0;
  return out;
}

StreamSolution solve_bvp(const GridFunction& M, BvpForm form) {
  require_even(M);
  const auto& g = *M.grid;
  const double L = g.L();
  const double sin2L = std::sin(2 * L);
  if (std::abs(sin2L) < 1e-12 || L >= std::numbers::pi / 2 - 1e-15)
    throw DegenerateDomainError("boundary-value Biot-Savart problem degenerates at this L");
  const double cot2L = std::cos(2 * L) / sin2L;
  const Kernels k = sample_kernels(g);
  const std::size_t n = g.n();

  // J1 = ∫ M k1' = -∫ M K2, J2 = ∫ M k2' = ∫ M K1.
  std::vector<double> J1(n), J2(n), I1(n), I2(n);
  if (form == BvpForm::integrated_by_parts) {
    const GridFunction a = cumulative(times(M, k.K2, Parity::odd));
    const GridFunction b = cumulative(times(M, k.K1, Parity::even));
    for (std::size_t i = 0; i < n; ++i) {
      J1[i] = -a[i];
      J2[i] = b[i];
      I1[i] = M[i] * k.k1[i] - M[0] - J1[i];
      I2[i] = M[i] * k.k2[i] - J2[i];
    }
  } else {
    const GridFunction Mp = differentiate(M, 1);
    const GridFunction a = cumulative(times(Mp, k.k1, Parity::even));
    const GridFunction b = cumulative(times(Mp, k.k2, Parity::odd));
    for (std::size_t i = 0; i < n; ++i) {
      I1[i] = a[i];
      I2[i] = b[i];
      J1[i] = M[i] * k.k1[i] - M[0] - I1[i];
      J2[i] = M[i] * k.k2[i] - I2[i];
    }
  }
  const double C = J1[n - 1] - cot2L * J2[n - 1];

  StreamSolution out;
  out.variant = StreamVariant::bvp;
  out.G = GridFunction::zeros(M.grid, Parity::odd);
  out.Gp = GridFunction::zeros(M.grid, Parity::even);
  out.I1 = GridFunction(M.grid, std::move(I1), Parity::even);
  out.I2 = GridFunction(M.grid, std::move(I2), Parity::odd);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = C - J1[i];
    out.G[i] = 0.5 * k.s[i] * a + 0.5 * k.c[i] * J2[i];
    out.Gp[i] = k.c[i] * a - k.s[i] * J2[i] + M[i] * k.cos2[i];
  }
  out.G[0] = 0.0;
  out.G[n - 1] = 0.0;
  return out;
}

LocalizedStream solve_localized(const GridFunction& Mt, const WeightParams& wp,
                                BumpProfile bump) {
  require_even(Mt);
  const auto& g = *Mt.grid;
  const double L = g.L();
  if (std::abs(wp.L - L) > 1e-12 * L) throw DomainError("weight parameters built for another L");
  const double cos2L = std::cos(2 * L);
  if (std::abs(cos2L) < 1e-8) throw DegenerateDomainError("cos 2L vanishes; correction undefined");

  const double scale = std::max(1.0, Mt.max_abs());
  const TaylorJet jet = taylor_jet(Mt, 2);
  const double tol = std::max(1e-9, 100.0 * 2.2e-16 * jet.condition) * scale;
  if (std::abs(jet.values[0]) > tol || std::abs(jet.values[2]) > tol)
    throw PreconditionError("localized Biot-Savart source has a nonzero 2-jet");

  const Kernels k = sample_kernels(g);
  const std::size_t n = g.n();
  const GridFunction a = cumulative(times(Mt, k.K2, Parity::odd));   // even
  const GridFunction b = cumulative(times(Mt, k.K1, Parity::even));  // odd

  LocalizedStream out;
  StreamSolution& loc = out.local;
  loc.variant = StreamVariant::localized;
  loc.G = GridFunction::zeros(Mt.grid, Parity::odd);
  loc.Gp = GridFunction::zeros(Mt.grid, Parity::even);
  loc.I1 = GridFunction::zeros(Mt.grid, Parity::even);
  loc.I2 = GridFunction::zeros(Mt.grid, Parity::odd);
  for (std::size_t i = 0; i < n; ++i) {
    loc.G[i] = 0.5 * k.s[i] * a[i] + 0.5 * k.c[i] * b[i];
    loc.Gp[i] = k.c[i] * a[i] - k.s[i] * b[i] + Mt[i] * k.cos2[i];
    loc.I1[i] = Mt[i] * k.k1[i] - Mt[0] + a[i];
    loc.I2[i] = Mt[i] * k.k2[i] - b[i];
  }
  loc.G[0] = 0.0;

  const double amp = loc.G[n - 1] / cos2L;
  const double width = L - wp.l2;
  StreamSolution cor = loc;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = g.node(i);
    const double x = (L - t) / width;
    const double eta = bump_eta(x, bump);
    const double deta = bump_eta_derivative(x, bump);
    cor.G[i] -= amp * k.c[i] * eta;
    cor.Gp[i] -= amp * (-2.0 * k.s[i] * eta - k.c[i] * deta / width);
  }
  cor.G[n - 1] = 0.0;
  out.corrected = std::move(cor);
  return out;
}

namespace {
double psi_exp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double psi_exp_d(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }
}  // namespace

double bump_eta(double x, BumpProfile profile) {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  const double t = 2.0 * x - 1.0;
  if (profile == BumpProfile::cubic) return 1.0 - t * t * (3.0 - 2.0 * t);
  const double a = psi_exp(1.0 - t), b = psi_exp(t);
  return a / (a + b);
}

double bump_eta_derivative(double x, BumpProfile profile) {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  const double t = 2.0 * x - 1.0;
  if (profile == BumpProfile::cubic) return -12.0 * t * (1.0 - t);
  const double a = psi_exp(1.0 - t), b = psi_exp(t);
  const double da = -psi_exp_d(1.0 - t), db = psi_exp_d(t);
  const double s = a + b;
  return 2.0 * (da * b - a * db) / (s * s);
}

GridFunction stream_residual(const StreamSolution& s, const GridFunction& M) {
  const GridFunction Gpp = differentiate(s.Gp, 1);
  const GridFunction Mp = differentiate(M, 1);
  GridFunction r = GridFunction::zeros(M.grid, Parity::odd);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double c = std::cos(M.theta(i));
    r[i] = Gpp[i] + 4.0 * s.G[i] - Mp[i] * c * c;
  }
  return r;
}

}  // namespace ipm
