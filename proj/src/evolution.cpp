#include "ipm/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "ipm/errors.hpp"
#include "ipm/weighted_spaces.hpp"

namespace ipm {

BackgroundPtr Background::from_profile(const ProfilePair& p) {
  auto bg = std::make_shared<Background>();
  bg->M = p.M;
  bg->Mp = p.Mp;
  bg->G = p.G;
  bg->Gp = p.Gp;
  return bg;
}

GridFunction EvolutionState::P() const {
  return multiply(M, [](double t) { return std::cos(t); }, Parity::even);
}

GridFunction EvolutionState::density() const { return frame == Frame::physical_t ? P() : M; }

EvolutionState make_state(GridFunction M, Frame frame, double time, BackgroundPtr background,
                          Advection advection) {
  if (M.parity != Parity::even) throw ParityError("density must be even");
  EvolutionState s;
  s.time = time;
  s.frame = frame;
  s.background = std::move(background);
  s.advection = advection;
  const double k = (s.background && frame == Frame::physical_t) ? 1.0 / (1.0 - time) : 1.0;
  transport_rhs(M, s.background.get(), k, &s.stream, advection);
  s.M = std::move(M);
  return s;
}

namespace {

GridFunction advect_derivative(const GridFunction& f, const std::vector<double>& G,
                               Advection adv) {
  return adv == Advection::upwind ? differentiate_upwind(f, G) : differentiate(f, 1);
}

}  // namespace

GridFunction transport_rhs(const GridFunction& M, const Background* bg, double k,
                           StreamSolution* stream, Advection adv) {
  if (M.parity != Parity::even) throw ParityError("density must be even");
  const std::size_t n = M.size();
  std::vector<double> G(n), Gp(n), Mp(n);
  if (bg) {
    const GridFunction f = M - k * bg->M;
    StreamSolution F = solve_bvp(f);
    for (std::size_t i = 0; i < n; ++i) {
      G[i] = k * bg->G[i] + F.G[i];
      Gp[i] = k * bg->Gp[i] + F.Gp[i];
    }
    const GridFunction df = advect_derivative(f, G, adv);
    for (std::size_t i = 0; i < n; ++i) Mp[i] = k * bg->Mp[i] + df[i];
    if (stream) {
      for (std::size_t i = 0; i < n; ++i) {
        F.G[i] = G[i];
        F.Gp[i] = Gp[i];
      }
      *stream = std::move(F);
    }
  } else {
    StreamSolution s = solve_bvp(M);
    for (std::size_t i = 0; i < n; ++i) {
      G[i] = s.G[i];
      Gp[i] = s.Gp[i];
    }
    const GridFunction dM = advect_derivative(M, G, adv);
    for (std::size_t i = 0; i < n; ++i) Mp[i] = dM[i];
    if (stream) *stream = std::move(s);
  }
  GridFunction r = GridFunction::zeros(M.grid, Parity::even);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = M.theta(i);
    r[i] = -2.0 * G[i] * Mp[i] + Gp[i] * M[i] + 2.0 * M[i] * G[i] * std::tan(t);
  }
  return r;
}

GridFunction rhs_physical(const GridFunction& P, Advection adv) {
  auto sec = [](double t) { return 1.0 / std::cos(t); };
  auto cosf = [](double t) { return std::cos(t); };
  const GridFunction M = multiply(P, sec, Parity::even);
  return multiply(transport_rhs(M, nullptr, 1.0, nullptr, adv), cosf, Parity::even);
}

GridFunction rhs_logarithmic(const GridFunction& M, const Background* bg, Advection adv) {
  return transport_rhs(M, bg, 1.0, nullptr, adv) - M;
}

double cfl_limit(const EvolutionState& s) {
  const double vmax = 2.0 * s.stream.G.max_abs();
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  const double c = s.advection == Advection::upwind ? kCflUpwind : kCflConstant;
  return c * s.M.grid->min_spacing() / vmax;
}

namespace {

GridFunction stage_rhs(const EvolutionState& s, const GridFunction& M, double time) {
  const Background* bg = s.background.get();
  if (s.frame == Frame::logarithmic_s) return rhs_logarithmic(M, bg, s.advection);
  return transport_rhs(M, bg, bg ? 1.0 / (1.0 - time) : 1.0, nullptr, s.advection);
}

void require_finite(const GridFunction& f, double time) {
  for (double v : f.values)
    if (!std::isfinite(v)) throw BlowupReached("non-finite density", time);
}

}  // namespace

EvolutionState step(const EvolutionState& s, double dt) {
  if (!(dt > 0.0)) throw StepSizeError("time step must be positive");
  if (dt > cfl_limit(s) * (1.0 + 1e-12)) throw StepSizeError("time step exceeds the CFL limit");
  if (s.frame == Frame::physical_t && s.time + dt >= 1.0)
    throw StepSizeError("step crosses the blow-up time t = 1");
  const double t = s.time;
  const GridFunction k1 = stage_rhs(s, s.M, t);
  const GridFunction k2 = stage_rhs(s, s.M + (0.5 * dt) * k1, t + 0.5 * dt);
  const GridFunction k3 = stage_rhs(s, s.M + (0.5 * dt) * k2, t + 0.5 * dt);
  const GridFunction k4 = stage_rhs(s, s.M + dt * k3, t + dt);
  GridFunction M = s.M;
  for (std::size_t i = 0; i < M.size(); ++i)
    M[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  require_finite(M, t + dt);
  return make_state(std::move(M), s.frame, t + dt, s.background, s.advection);
}

namespace {

double physical_factor(const EvolutionState& s) {
  // P = e^s M cosθ in the s-frame when read in physical units.
  return s.frame == Frame::logarithmic_s ? std::exp(s.time) : 1.0;
}

}  // namespace

EvolutionRun evolve(EvolutionState init, const RunOptions& opt) {
  EvolutionRun run;
  EvolutionState s = std::move(init);
  BlowupDiagnostics& d = run.diag;
  double last_grad = 0.0;
  auto push = [&](const EvolutionState& st) {
    const GridFunction P = st.P();
    const double fac = physical_factor(st);
    const double grad = fac * differentiate(P, 1).max_abs();
    // Integrate ‖∂θP‖∞ over physical time.
    const double tphys = st.frame == Frame::logarithmic_s ? 1.0 - std::exp(-st.time) : st.time;
    if (d.times.empty()) {
      d.accumulated_gradient.push_back(0.0);
    } else {
      const double tprev = d.times.back();
      const double tprev_phys =
          st.frame == Frame::logarithmic_s ? 1.0 - std::exp(-tprev) : tprev;
      d.accumulated_gradient.push_back(d.accumulated_gradient.back() +
                                       0.5 * (grad + last_grad) * (tphys - tprev_phys));
    }
    last_grad = grad;
    d.times.push_back(st.time);
    d.sup_density.push_back(fac * P.max_abs());
    if (st.background) {
      const double k = st.frame == Frame::physical_t ? 1.0 / (1.0 - st.time) : 1.0;
      d.sup_perturbation.push_back((st.M - k * st.background->M).max_abs());
    }
  };
  push(s);
  const double eps = 1e-12 * std::max(1.0, std::abs(opt.t_end));
  while (s.time < opt.t_end - eps) {
    double dt = std::min({opt.dt, opt.t_end - s.time, 0.9 * cfl_limit(s)});
    if (s.frame == Frame::physical_t) dt = std::min(dt, 0.5 * (1.0 - s.time));
    if (dt < opt.dt_min) {
      d.blowup = true;
      d.blowup_time = s.time;
      break;
    }
    try {
      s = step(s, dt);
    } catch (const BlowupReached& e) {
      d.blowup = true;
      d.blowup_time = e.time;
      break;
    }
    push(s);
    if (d.sup_density.back() > opt.blowup_sup) {
      d.blowup = true;
      d.blowup_time = s.time;
      break;
    }
  }
  run.final = std::move(s);
  return run;
}

GridFunction truncation_cutoff(const GridPtr& grid, double a) {
  const double L = grid->L();
  if (a < 0.0) throw DomainError("cutoff radius must be nonnegative");
  if (a == 0.0) return GridFunction::zeros(grid, Parity::even);
  return GridFunction::sample(
      grid, [&](double t) { return bump_eta((L - t) / (2.0 * a), BumpProfile::smooth); },
      Parity::even);
}

DecayResult run_decay_experiment(const ProfilePair& p, double cutoff_a, double s_max, double dt) {
  const auto bg = Background::from_profile(p);
  const GridFunction chi = truncation_cutoff(p.M.grid, cutoff_a);
  GridFunction M0 = p.M;
  for (std::size_t i = 0; i < M0.size(); ++i) M0[i] = p.M[i] * (1.0 - chi[i]);
  if (cutoff_a > 0.0) {
    // Exactly zero on [L − a, L].
    for (std::size_t i = 0; i < M0.size(); ++i)
      if (p.L - M0.theta(i) <= cutoff_a) M0[i] = 0.0;
  }
  const H4TildeForm form(p.M.grid, WeightParams::linked(p.L));
  DecayResult out;
  EvolutionState s = make_state(M0, Frame::logarithmic_s, 0.0, bg);
  auto record_norms = [&](const EvolutionState& st) {
    const GridFunction f = st.M - p.M;
    out.s.push_back(st.time);
    out.sup_norm.push_back(f.max_abs());
    out.h4tilde.push_back(std::sqrt(std::max(0.0, form.inner(f, f))));
  };
  record_norms(s);
  const double eps = 1e-12 * std::max(1.0, s_max);
  while (s.time < s_max - eps) {
    const double h = std::min({dt, s_max - s.time, 0.9 * cfl_limit(s)});
    try {
      s = step(s, h);
    } catch (const BlowupReached&) {
      out.blowup = true;
      break;
    }
    record_norms(s);
  }
  out.final = std::move(s);
  out.decayed = !out.blowup && out.sup_norm.back() < out.sup_norm.front();
  const double s1 = out.s.back();
  std::size_t j = out.s.size() - 1;
  while (j > 0 && out.s[j] > s1 - 1.0) --j;
  if (s1 > out.s[j] && out.sup_norm[j] > 0.0 && out.sup_norm.back() > 0.0)
    out.late_rate = std::log(out.sup_norm.back() / out.sup_norm[j]) / (s1 - out.s[j]);
  return out;
}

}  // namespace ipm
