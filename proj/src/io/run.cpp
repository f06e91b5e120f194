#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "ipm/cli_io.hpp"
#include "ipm/errors.hpp"
#include "ipm/evolution.hpp"
#include "ipm/linearized.hpp"
#include "ipm/shooting.hpp"
#include "ipm/weighted_spaces.hpp"

namespace ipm {
namespace {

using nlohmann::json;

struct Context {
  RunConfig cfg;
  std::filesystem::path dir;
  json results = json::object();
  json grids = json::array();
  json files = json::array();
  int exit_code = 0;

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    const auto path = dir / name;
    write_csv(path, header, rows);
    files.push_back({{"name", name}, {"sha256", sha256_hex(path)}});
  }
  void grid(std::size_t n, GridKind kind) {
    grids.push_back({{"n", n}, {"kind", kind == GridKind::uniform ? "uniform" : "clustered"}});
  }
};

GridKind kind_of(const RunConfig& c) { return *c.grid == "uniform" ? GridKind::uniform : GridKind::clustered; }

ProfilePair profile_for(Context& ctx) {
  const GridKind kind = kind_of(ctx.cfg);
  ctx.grid(*ctx.cfg.n, kind);
  return build_profile(ctx.cfg.A, *ctx.cfg.n, kind);
}

WeightParams weights_for(const RunConfig& c, double L) {
  return WeightParams::linked(L, c.l1.value_or(0.3), c.B.value_or(1e4));
}

json wp_json(const WeightParams& w) {
  return {{"l1", w.l1}, {"l2", w.l2}, {"K", w.K}, {"B", w.B}};
}

void run_profile(Context& ctx) {
  const ProfilePair p = profile_for(ctx);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < p.M.size(); ++i) rows.push_back({p.M.theta(i), p.M[i], p.G[i], p.Gp[i]});
  ctx.csv("profile.csv", {"theta", "M", "G", "Gp"}, rows);
  ctx.results = {{"A", p.A},
                 {"L", p.L},
                 {"GpL", p.GpL},
                 {"GpL_314", p.diag.GpL_314},
                 {"GpL_317", p.diag.GpL_317},
                 {"holder_alpha", p.holder_alpha},
                 {"fitted_exponent", fit_boundary_exponent(p)},
                 {"M_at_L", p.diag.M_stop},
                 {"G_at_L", p.diag.G_stop},
                 {"max_Mp", p.diag.max_Mp},
                 {"monotonicity_residual", monotonicity_identity_residual(p)}};
}

void run_shoot(Context& ctx) {
  std::vector<SweepPoint> sweep;
  if (ctx.cfg.target_L) {
    const ShootingResult r = shoot(*ctx.cfg.target_L);
    sweep = r.sweep;
    ctx.results = {{"target_L", r.target_L}, {"A_star", r.A_star}, {"achieved_L", r.achieved_L},
                   {"iterations", r.iterations}};
  } else {
    sweep = sweep_root_angles(default_sweep());
    std::sort(sweep.begin(), sweep.end(), [](auto a, auto b) { return a.A < b.A; });
    ctx.results = {{"pi_over_2", std::numbers::pi / 2}};
  }
  std::vector<std::vector<double>> rows;
  for (const auto& s : sweep) rows.push_back({s.A, s.L});
  ctx.csv("sweep.csv", {"A", "L"}, rows);
}

void run_evolve(Context& ctx) {
  const ProfilePair p = profile_for(ctx);
  const RunConfig& c = ctx.cfg;
  if (c.frame == "t") {
    auto run = evolve(make_state(p.M, Frame::physical_t), {.dt = c.dt, .t_end = c.t_max});
    const auto& d = run.diag;
    std::vector<std::vector<double>> rows;
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      const double v = d.sup_density[i] * (1.0 - d.times[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      rows.push_back({d.times[i], d.sup_density[i], v, d.accumulated_gradient[i]});
    }
    ctx.csv("series.csv", {"t", "sup_P", "sup_P_times_1mt", "accum_grad"}, rows);
    const bool band = lo >= 3.92 && hi <= 4.08;
    ctx.results = {{"L", p.L},           {"t_final", run.final.time}, {"min_sup_P_times_1mt", lo},
                   {"max_sup_P_times_1mt", hi}, {"in_band", band},    {"blowup", d.blowup}};
    if (!band) ctx.exit_code = 1;
  } else {
    auto run = evolve(make_state(p.M, Frame::logarithmic_s, 0.0, Background::from_profile(p)),
                      {.dt = c.dt, .t_end = c.s_max});
    const auto& d = run.diag;
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      worst = std::max(worst, d.sup_perturbation[i]);
      rows.push_back({d.times[i], d.sup_perturbation[i]});
    }
    ctx.csv("series.csv", {"s", "sup_perturbation"}, rows);
    ctx.results = {{"L", p.L}, {"s_final", run.final.time}, {"max_sup_perturbation", worst},
                   {"stationary", worst <= 1e-5}};
    if (worst > 1e-5) ctx.exit_code = 1;
  }
}

void run_decay(Context& ctx) {
  const ProfilePair p = profile_for(ctx);
  const double a = ctx.cfg.cutoff_a.value_or(0.02 * p.L);
  const DecayResult d = run_decay_experiment(p, a, ctx.cfg.s_max, ctx.cfg.dt);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < d.s.size(); ++i) rows.push_back({d.s[i], d.sup_norm[i], d.h4tilde[i]});
  ctx.csv("decay.csv", {"s", "sup_perturbation", "h4tilde_perturbation"}, rows);
  const double smallest = *std::min_element(d.sup_norm.begin(), d.sup_norm.end());
  ctx.results = {{"L", p.L},
                 {"cutoff_a", a},
                 {"initial_sup", d.sup_norm.front()},
                 {"final_sup", d.sup_norm.back()},
                 {"min_sup", smallest},
                 {"decayed", d.decayed},
                 {"late_rate", d.late_rate},
                 {"blowup", d.blowup}};
  if (d.blowup) ctx.exit_code = 1;
}

void run_coercivity(Context& ctx) {
  const ProfilePair p = profile_for(ctx);
  const CoercivityReport r = coercivity_quotient(p, weights_for(ctx.cfg, p.L), ctx.cfg.samples, ctx.cfg.seed);
  std::vector<std::vector<double>> q, h;
  for (std::size_t i = 0; i < r.quotients.size(); ++i) q.push_back({double(i), r.quotients[i]});
  for (std::size_t i = 0; i < r.bin_counts.size(); ++i)
    h.push_back({r.bin_edges[i], r.bin_edges[i + 1], double(r.bin_counts[i])});
  ctx.csv("quotients.csv", {"sample", "quotient"}, q);
  ctx.csv("histogram.csv", {"lo", "hi", "count"}, h);
  json attempts = json::array();
  for (const auto& a : r.attempts)
    attempts.push_back({{"wp", wp_json(a.wp)}, {"min_quotient", a.min_quotient},
                        {"gram_min_eigenvalue", a.gram_min_eigenvalue}, {"positive", a.positive}});
  ctx.results = {{"L", p.L},
                 {"certified", r.certified},
                 {"retries", r.retries},
                 {"wp", wp_json(r.wp)},
                 {"min_quotient", r.min_quotient},
                 {"gram_min_eigenvalue", r.gram_min_eigenvalue},
                 {"attempts", attempts}};
  if (!r.certified) ctx.exit_code = 1;
}

void run_spectrum(Context& ctx) {
  const ProfilePair p = profile_for(ctx);
  const SpectrumReport s = discrete_spectrum(p);
  ctx.grid(s.n_fine, kind_of(ctx.cfg));
  std::vector<std::vector<double>> rows;
  for (const auto& l : s.coarse) {
    const bool res = std::find(s.resolved.begin(), s.resolved.end(), l) != s.resolved.end();
    rows.push_back({double(s.n), l.real(), l.imag(), res ? 1.0 : 0.0});
  }
  for (const auto& l : s.fine) rows.push_back({double(s.n_fine), l.real(), l.imag(), 0.0});
  ctx.csv("spectrum.csv", {"n", "re", "im", "resolved"}, rows);
  json resolved = json::array();
  for (const auto& l : s.resolved) resolved.push_back({l.real(), l.imag()});
  ctx.results = {{"L", p.L},
                 {"unstable_count", s.unstable},
                 {"resolved", resolved},
                 {"translation_eigenvalue", {s.nearest_one.real(), s.nearest_one.imag()}},
                 {"translation_alignment", s.nearest_one_alignment},
                 {"translation_residual", s.translation_residual}};
}

void run_norms(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const ProfilePair p = profile_for(ctx);
  const WeightParams wp = weights_for(c, p.L);
  const auto samples = random_even_samples(p.M.grid, c.samples, c.seed);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const NormReport r = norms(samples[i], wp);
    rows.push_back({double(i), r.h4tilde, r.h4, r.pieces[0], r.pieces[1], r.pieces[2], r.pieces[3]});
  }
  ctx.csv("norms.csv", {"sample", "h4tilde", "h4", "value0_sq", "second0_sq", "phi_piece", "psi_piece"}, rows);
  const InequalityReport q = verify_inequalities(samples, wp);
  ctx.results = {{"L", p.L},
                 {"wp", wp_json(wp)},
                 {"equivalence_upper", q.equivalence_upper},
                 {"equivalence_lower", q.equivalence_lower},
                 {"hardy", q.hardy},
                 {"hardy_bound", q.hardy_bound},
                 {"interpolation", q.interpolation},
                 {"embedding", q.embedding},
                 {"algebra", q.algebra}};
  bool finite = std::isfinite(q.equivalence_upper) && std::isfinite(q.equivalence_lower) &&
                std::isfinite(q.hardy) && std::isfinite(q.algebra);
  if (!finite || q.hardy > q.hardy_bound) ctx.exit_code = 1;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx;
  ctx.cfg = config.resolved();
  if (!ctx.cfg.output_dir.empty()) {
    ctx.dir = ctx.cfg.output_dir;
  } else if (const char* env = std::getenv("IPM_OUTPUT_DIR"); env && *env) {
    ctx.dir = env;
  } else {
    ctx.dir = std::filesystem::current_path();
  }
  std::filesystem::create_directories(ctx.dir);

  switch (ctx.cfg.command) {
    case Command::profile: run_profile(ctx); break;
    case Command::shoot: run_shoot(ctx); break;
    case Command::evolve: run_evolve(ctx); break;
    case Command::decay: run_decay(ctx); break;
    case Command::coercivity: run_coercivity(ctx); break;
    case Command::spectrum: run_spectrum(ctx); break;
    case Command::norms: run_norms(ctx); break;
  }

  RunOutcome out;
  out.exit_code = ctx.exit_code;
  out.directory = ctx.dir;
  out.manifest = {{"command", to_string(ctx.cfg.command)},
                  {"config", ctx.cfg.to_json()},
                  {"version", IPM_VERSION},
                  {"grids", ctx.grids},
                  {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                  {"results", ctx.results},
                  {"files", ctx.files}};
  std::ofstream(ctx.dir / "manifest.json") << out.manifest.dump(2) << "\n";
  return out;
}

int cli_main(const std::vector<std::string>& args) {
  std::optional<RunConfig> cfg;
  try {
    std::string help;
    cfg = parse_config(args, &help);
    if (!cfg) {
      std::cout << help;
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  try {
    const RunOutcome r = run(*cfg);
    std::cout << r.manifest["results"].dump(2) << "\n";
    if (r.exit_code != 0) std::cerr << "scientific check failed; see " << (r.directory / "manifest.json").string() << "\n";
    return r.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ipm
