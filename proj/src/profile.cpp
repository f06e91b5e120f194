#include "ipm/profile.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "ipm/biot_savart.hpp"
#include "ipm/errors.hpp"

namespace ipm {
namespace {

constexpr double kSeriesCut = 0.3;
constexpr int kSeriesTerms = 40;

// Coefficients of tanθ = Σ T_k θ^(2k+1).
const std::array<double, kSeriesTerms>& tan_coefficients() {
  static const std::array<double, kSeriesTerms> T = [] {
    std::array<double, kSeriesTerms> t{};
    t[0] = 1.0;
    for (int k = 1; k < kSeriesTerms; ++k) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += t[i] * t[k - 1 - i];
      t[k] = s / (2 * k + 1);
    }
    return t;
  }();
  return T;
}

// Σ_{k ≥ k0} T_k x^(k − k0), x = θ².
double tan_tail(double x, int k0) {
  const auto& T = tan_coefficients();
  double s = 0.0;
  for (int k = kSeriesTerms - 1; k >= k0; --k) s = s * x + T[k];
  return s;
}

// (sinθ/θ)² = Σ_{k≥1} (−1)^(k+1) 2^(2k−1) θ^(2k−2) / (2k)!; tail from k0.
double sinc2_tail(double x, int k0) {
  double s = 0.0;
  for (int k = 30; k >= k0; --k) {
    const double c = ((k % 2) ? 1.0 : -1.0) * std::exp((2 * k - 1) * std::log(2.0) - std::lgamma(2.0 * k + 1));
    s = s * x + c;
  }
  return s;
}

struct TrigParts {
  double tau;    // tanθ/θ
  double t2;     // (τ − 1)/θ²
  double t4;     // (t2 − 1/3)/θ²
  double s2;     // (sinθ/θ)²
  double sigma;  // (s2 − 1)/θ²
};

TrigParts trig_parts(double t) {
  const double x = t * t;
  TrigParts p{};
  if (t <= kSeriesCut) {
    p.tau = tan_tail(x, 0);
    p.t2 = tan_tail(x, 1);
    p.t4 = tan_tail(x, 2);
    p.s2 = sinc2_tail(x, 1);
    p.sigma = sinc2_tail(x, 2);
  } else {
    p.tau = std::tan(t) / t;
    p.t2 = (p.tau - 1.0) / x;
    p.t4 = (p.t2 - 1.0 / 3.0) / x;
    const double sc = std::sin(t) / t;
    p.s2 = sc * sc;
    p.sigma = (p.s2 - 1.0) / x;
  }
  return p;
}

struct SeedSystem {
  double A, c;
  double C1, C2;

  // θm' = RHS1 − 4m
  double rhs1(double m, double g, double h, double t, const TrigParts& tp) const {
    const double x = t * t;
    const double gamma = 1.0 - c * x + x * x * g;
    const double E = 5 * g + h + 2 * tp.t2 - 2 * c * tp.tau + 2 * x * g * tp.tau;
    const double mu = -A + x * m;
    return (4 * E - A * mu - 4 * A * (c - x * g) + x * mu * E) / (2 * gamma);
  }

  // Remainders F1, F3 of θy' + Λy = b + θ²F.
  void forcing(double m, double g, double h, double t, double& F1, double& F3) const {
    const double x = t * t;
    const TrigParts tp = trig_parts(t);
    const double gamma = 1.0 - c * x + x * x * g;
    const double E = 5 * g + h + 2 * tp.t2 - 2 * c * tp.tau + 2 * x * g * tp.tau;
    const double mu = -A + x * m;
    const double kappa = (c - x * g) / gamma;
    const double kappa2 = (c * c - g - c * x * g) / gamma;
    F1 = 4 * tp.t4 - 4 * c * tp.t2 + 4 * g * tp.tau - 0.5 * A * m - 2 * A * kappa2 +
         0.5 * (mu * E + kappa * (4 * E - A * mu) + x * kappa * mu * E);
    const double R1 = rhs1(m, g, h, t, tp);
    F3 = F1 - 4 * g - R1 * tp.s2 + 2 * A * tp.sigma;
  }
};

const Eigen::Matrix3d& eigvecs() {
  static const Eigen::Matrix3d V = (Eigen::Matrix3d() << 1, 3, 0, 0, 1, 1, 0, -2, -5).finished();
  return V;
}
const Eigen::Matrix3d& eigvecs_inv() {
  static const Eigen::Matrix3d W = eigvecs().inverse();
  return W;
}

using State6 = std::array<double, 6>;  // θ, M, G, G', I1, I2

struct CharacteristicSystem {
  void operator()(const State6& x, State6& dx, double) const {
    const double t = x[0], M = x[1], G = x[2], Gp = x[3];
    const double c = std::cos(t);
    const double S = M * (Gp - 1.0 + 2.0 * G * std::tan(t));
    dx[0] = 2.0 * G;
    dx[1] = S;
    dx[2] = 2.0 * G * Gp;
    dx[3] = S * c * c - 8.0 * G * G;
    dx[4] = S * kernel::k1(t);
    dx[5] = S * kernel::k2(t);
  }
};

struct Trajectory {
  std::vector<double> tau;
  std::vector<State6> x;
  bool root = false;
  double L = 0.0;
};

State6 initial_state(const LocalSeed& seed) {
  const auto s = seed.at(seed.a);
  return {seed.a, s.M, s.G, s.Gp, s.I1, s.I2};
}

// Integrates until the root of G or until θ passes theta_limit.
Trajectory integrate(const LocalSeed& seed, const ContinuationOptions& opt, double theta_limit) {
  using namespace boost::numeric::odeint;
  auto stepper = make_dense_output(opt.atol, opt.rtol, runge_kutta_dopri5<State6>());
  CharacteristicSystem sys;
  Trajectory tr;
  State6 x0 = initial_state(seed);
  stepper.initialize(x0, 0.0, 1e-3);
  tr.tau.push_back(0.0);
  tr.x.push_back(x0);
  const double pole = std::numbers::pi / 2 - 1e-6;
  while (true) {
    stepper.do_step(sys);
    const State6& x = stepper.current_state();
    const double tau = stepper.current_time();
    tr.tau.push_back(tau);
    tr.x.push_back(x);
    if (!std::isfinite(x[1]) || !std::isfinite(x[2]))
      throw NoConvergenceError("continuation produced non-finite values");
    if (x[1] < -opt.m_stop) throw MonotonicityError("M became negative during continuation");
    if (x[0] >= theta_limit) return tr;
    if (x[2] < opt.g_stop && x[1] < opt.m_stop) {
      if (x[3] >= 0.0) throw NoRootError("G flattened out without crossing zero");
      tr.root = true;
      tr.L = x[0] + x[2] / (-x[3]);
      return tr;
    }
    if (x[0] > pole || x[2] <= 0.0)
      throw NoRootError("continuation reached π/2 without a root of G");
    if (tau > opt.tau_max) throw NoRootError("characteristic time budget exhausted");
  }
}

// State at θ = target inside step k of the trajectory, by exact dopri5 steps
// from the accepted state and a Newton correction of the step length.
State6 state_at(const Trajectory& tr, std::size_t k, double target) {
  using namespace boost::numeric::odeint;
  runge_kutta_dopri5<State6> rk;
  CharacteristicSystem sys;
  const State6& xa = tr.x[k];
  const State6& xb = tr.x[k + 1];
  const double span = tr.tau[k + 1] - tr.tau[k];
  double dt = span * (target - xa[0]) / (xb[0] - xa[0]);
  State6 out = xa, dxa, dxo;
  sys(xa, dxa, tr.tau[k]);
  for (int it = 0; it < 8; ++it) {
    rk.do_step(sys, xa, dxa, tr.tau[k], out, dxo, dt);
    const double err = target - out[0];
    if (std::abs(err) <= 1e-16 * target) break;
    dt += err / (2.0 * out[2]);
  }
  return out;
}

}  // namespace

PrintedConstants printed_forcing_constants(double A) {
  return {-(A + 2.0) / 3.0 * (A + 8.0) + 8.0 / 3.0 - 2.0 * A, 2.0 * A};
}

LocalSeed::State LocalSeed::at(double t) const {
  const double c = (A + 2.0) / 3.0;
  Eigen::Vector3d z(fixed_point.evaluate(0, t), fixed_point.evaluate(1, t),
                    fixed_point.evaluate(2, t));
  const Eigen::Vector3d y = eigvecs() * z;
  const double m = y[0], g = y[1], h = y[2];
  const SeedSystem sys{A, c, C1, C2};
  const double x = t * t;
  State s{};
  s.M = 4.0 - A * x + x * x * m;
  s.G = t - c * x * t + x * x * t * g;
  s.Gp = 1.0 - 3.0 * c * x + x * x * (5.0 * g + h);
  s.Mp = -2.0 * A * t + x * t * sys.rhs1(m, g, h, t, trig_parts(t));
  const double s2 = std::sin(2 * t), c2 = std::cos(2 * t);
  s.I1 = 2.0 * s.G * s2 + s.Gp * c2 - 1.0;
  s.I2 = -2.0 * s.G * c2 + s.Gp * s2;
  return s;
}

LocalSeed local_profile(double A, const SeedOptions& opt) {
  if (!(A >= 0.0) || !std::isfinite(A)) throw DomainError("A must be nonnegative");
  LocalSeed seed;
  seed.A = A;
  const PrintedConstants pc = printed_forcing_constants(A);
  seed.C1A = pc.C1A;
  seed.C2A = pc.C2A;
  seed.C1 = (-A * A - 16.0 * A - 8.0) / 6.0;
  seed.C2 = 4.0 * (A + 2.0) / 3.0 + 2.0 * A;
  const SeedSystem sys{A, (A + 2.0) / 3.0, seed.C1, seed.C2};

  const Eigen::Vector3d b(seed.C1, 0.0, seed.C1 + seed.C2);
  const Eigen::Vector3d v = eigvecs_inv() * b;

  FixedPointProblem pb;
  pb.lambdas = {4.0, 2.0, 5.0};
  pb.v = {v[0], v[1], v[2]};
  pb.F = [sys](std::span<const double> z, double t, std::span<double> out) {
    const Eigen::Vector3d y = eigvecs() * Eigen::Vector3d(z[0], z[1], z[2]);
    double F1 = 0.0, F3 = 0.0;
    sys.forcing(y[0], y[1], y[2], t, F1, F3);
    const Eigen::Vector3d f = eigvecs_inv() * Eigen::Vector3d(F1, 0.0, F3);
    out[0] = f[0];
    out[1] = f[1];
    out[2] = f[2];
  };
  pb.nodes = opt.nodes;
  pb.tol = opt.tol;

  double d = opt.a_cap;
  for (int attempt = 0; attempt <= pb.max_shrinks; ++attempt) {
    pb.d_hint = d;
    seed.fixed_point = solve_singular_fixed_point(pb);
    seed.a = seed.fixed_point.d;
    const auto s = seed.at(seed.a);
    if (s.G >= 0.5 * seed.a) break;
    if (attempt == pb.max_shrinks)
      throw NoConvergenceError("no seed radius with G(a) >= a/2");
    d = 0.5 * seed.a;
  }

  auto grid = AngularGrid::clustered(seed.a, opt.nodes);
  seed.m = GridFunction::zeros(grid, Parity::even);
  seed.g = GridFunction::zeros(grid, Parity::even);
  seed.h = GridFunction::zeros(grid, Parity::even);
  for (std::size_t i = 0; i < grid->n(); ++i) {
    const double t = grid->node(i);
    const Eigen::Vector3d z(seed.fixed_point.evaluate(0, t), seed.fixed_point.evaluate(1, t),
                            seed.fixed_point.evaluate(2, t));
    const Eigen::Vector3d y = eigvecs() * z;
    seed.m[i] = y[0];
    seed.g[i] = y[1];
    seed.h[i] = y[2];
  }
  return seed;
}

std::vector<ContinuationSample> trace_continuation(const LocalSeed& seed,
                                                   const std::vector<double>& thetas,
                                                   const ContinuationOptions& opt) {
  if (!std::is_sorted(thetas.begin(), thetas.end()))
    throw DomainError("trace angles must be increasing");
  std::vector<ContinuationSample> out;
  if (thetas.empty()) return out;
  const Trajectory tr = integrate(seed, opt, thetas.back());
  if (tr.root && tr.L < thetas.back())
    throw NoRootError("G vanishes before the last requested angle");
  std::size_t k = 0;
  for (double t : thetas) {
    if (t <= seed.a) {
      const auto s = seed.at(t);
      out.push_back({t, s.M, s.G, s.Gp, s.I1, s.I2});
      continue;
    }
    while (k + 2 < tr.x.size() && tr.x[k + 1][0] < t) ++k;
    const State6 x = state_at(tr, k, t);
    out.push_back({t, x[1], x[2], x[3], x[4], x[5]});
  }
  return out;
}

ProfilePair continue_profile(const LocalSeed& seed, std::size_t n, GridKind kind,
                             const ContinuationOptions& opt) {
  const Trajectory tr = integrate(seed, opt, std::numbers::pi / 2);
  const State6& end = tr.x.back();
  const double L = tr.L;

  ProfilePair p;
  p.A = seed.A;
  p.L = L;
  p.seed = seed;
  auto grid = kind == GridKind::clustered ? AngularGrid::clustered(L, n) : AngularGrid::uniform(L, n);
  p.M = GridFunction::zeros(grid, Parity::even);
  p.G = GridFunction::zeros(grid, Parity::odd);
  p.Gp = GridFunction::zeros(grid, Parity::even);
  p.Mp = GridFunction::zeros(grid, Parity::odd);
  p.I1 = GridFunction::zeros(grid, Parity::even);
  p.I2 = GridFunction::zeros(grid, Parity::odd);

  const double sin2L = std::sin(2 * L), cos2L = std::cos(2 * L);
  p.diag.theta_stop = end[0];
  p.diag.M_stop = end[1];
  p.diag.G_stop = end[2];
  p.diag.GpL_state = end[3];
  p.diag.GpL_317 = end[5] / sin2L;
  p.diag.GpL_314 = cos2L * (1.0 + end[4]) + sin2L * end[5];
  p.diag.steps = tr.x.size() - 1;
  p.GpL = p.diag.GpL_317;
  p.holder_alpha = 0.5 - 1.0 / (2.0 * p.GpL);
  p.diag.holder_regularity = std::min(1.0, p.holder_alpha);

  std::size_t k = 0;
  double max_Mp = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid->node(i);
    if (i == n - 1) {
      p.M[i] = 0.0;
      p.G[i] = 0.0;
      p.Gp[i] = p.GpL;
      p.Mp[i] = 0.0;
      p.I1[i] = end[4];
      p.I2[i] = end[5];
      continue;
    }
    if (t <= seed.a) {
      const auto s = seed.at(t);
      p.M[i] = s.M;
      p.G[i] = s.G;
      p.Gp[i] = s.Gp;
      p.Mp[i] = s.Mp;
      p.I1[i] = s.I1;
      p.I2[i] = s.I2;
    } else if (t >= end[0]) {
      p.M[i] = end[1];
      p.G[i] = (L - t) * (-p.GpL);
      p.Gp[i] = end[3];
      p.Mp[i] = 0.0;
      p.I1[i] = end[4];
      p.I2[i] = end[5];
    } else {
      while (k + 2 < tr.x.size() && tr.x[k + 1][0] < t) ++k;
      const State6 x = state_at(tr, k, t);
      p.M[i] = x[1];
      p.G[i] = x[2];
      p.Gp[i] = x[3];
      p.I1[i] = x[4];
      p.I2[i] = x[5];
      p.Mp[i] = x[1] * (x[3] - 1.0 + 2.0 * x[2] * std::tan(t)) / (2.0 * x[2]);
    }
    max_Mp = std::max(max_Mp, p.Mp[i]);
  }
  p.diag.max_Mp = max_Mp;
  return p;
}

ProfilePair build_profile(double A, std::size_t n, GridKind kind) {
  return continue_profile(local_profile(A), n, kind);
}

double monotonicity_identity_residual(const GridFunction& M, const GridFunction& Gp,
                                      const GridFunction& G, const GridFunction& Mp,
                                      const GridFunction& I2, double cutoff) {
  (void)M;
  const double L = G.grid->L();
  const std::size_t n = G.size();
  // w = G' + 2G tanθ is even; differentiate it with local stencils on the
  // mirrored node set so the endpoint singularity at L stays local.
  std::vector<double> x, w;
  for (std::size_t i = n; i-- > 1;) {
    x.push_back(-G.theta(i));
    w.push_back(Gp[i] + 2.0 * G[i] * std::tan(G.theta(i)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(G.theta(i));
    w.push_back(Gp[i] + 2.0 * G[i] * std::tan(G.theta(i)));
  }
  constexpr std::size_t width = 8;
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = G.theta(i);
    if (t > cutoff * L) break;
    const std::size_t centre = n - 1 + i;
    std::size_t lo = centre >= width / 2 ? centre - width / 2 : 0;
    lo = std::min(lo, x.size() - width);
    const std::span<const double> xs(x.data() + lo, width);
    const auto c = fornberg_weights(t, xs, 1);
    double dw = 0.0;
    for (std::size_t k = 0; k < width; ++k) dw += c[1][k] * w[lo + k];
    const double ct = std::cos(t);
    r = std::max(r, std::abs(dw - Mp[i] * ct * ct - I2[i] / (ct * ct)));
  }
  return r;
}

double monotonicity_identity_residual(const ProfilePair& p, double cutoff) {
  return monotonicity_identity_residual(p.M, p.Gp, p.G, p.Mp, p.I2, cutoff);
}

double fit_boundary_exponent(const GridFunction& M, double L) {
  std::vector<double> r, v;
  for (std::size_t i = 0; i < M.size(); ++i) {
    const double d = L - M.theta(i);
    if (d > 0.0 && M[i] > 0.0) {
      r.push_back(d);
      v.push_back(M[i]);
    }
  }
  if (r.empty()) throw ResolutionError("no resolved nodes near L");
  const double rmin = *std::min_element(r.begin(), r.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] > 10.0 * rmin * (1.0 + 1e-12)) continue;
    const double lx = std::log(r[i]), ly = std::log(v[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 3) throw ResolutionError("fewer than three nodes in the last decade before L");
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

double fit_boundary_exponent(const ProfilePair& p) {
  if (!(p.GpL < 0.0)) throw DomainError("boundary exponent needs G'(L) < 0");
  return fit_boundary_exponent(p.M, p.L);
}

GridFunction profile_residual(const ProfilePair& p) {
  const GridFunction dM = differentiate(p.M, 1);
  GridFunction r = GridFunction::zeros(p.M.grid, Parity::even);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double t = p.M.theta(i);
    r[i] = p.M[i] + 2 * p.G[i] * dM[i] - p.Gp[i] * p.M[i] - 2 * p.M[i] * p.G[i] * std::tan(t);
  }
  return r;
}

}  // namespace ipm
