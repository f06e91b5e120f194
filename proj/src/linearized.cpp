#include "ipm/linearized.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "ipm/biot_savart.hpp"
#include "ipm/errors.hpp"

namespace ipm {
namespace {

void require_profile_grid(const GridFunction& f, const ProfilePair& p) {
  if (f.parity != Parity::even) throw ParityError("linearized operators act on even functions");
  if (f.grid != p.M.grid) throw DomainError("function and profile live on different grids");
}

// Shared shape of ℒ and L̄: m + 2G*m' + 2F M*' − G*'m − F'M* − 2G*m tanθ − 2F M* tanθ.
GridFunction linear_part(const GridFunction& m, const GridFunction& F, const GridFunction& Fp,
                         const ProfilePair& p, Advection adv) {
  const GridFunction dm =
      adv == Advection::upwind ? differentiate_upwind(m, p.G.values) : differentiate(m, 1);
  GridFunction r = GridFunction::zeros(m.grid, Parity::even);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double tn = std::tan(m.theta(i));
    r[i] = m[i] + 2 * p.G[i] * dm[i] + 2 * F[i] * p.Mp[i] - p.Gp[i] * m[i] - Fp[i] * p.M[i] -
           2 * p.G[i] * m[i] * tn - 2 * F[i] * p.M[i] * tn;
  }
  return r;
}

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

struct Eigenpairs {
  std::vector<std::complex<double>> values;
  std::vector<double> alignment;  // |cos| between eigenvector and M*
};

Eigenpairs eigenpairs_of_minus_L(const ProfilePair& p, Advection adv, bool vectors) {
  const OperatorMatrix A = assemble(OperatorLabel::L_full, p, WeightParams::linked(p.L), adv);
  Eigen::EigenSolver<Eigen::MatrixXd> es(-to_eigen(A.entries), vectors);
  if (es.info() != Eigen::Success) throw NoConvergenceError("eigensolver failed");
  const Eigen::Index n = es.eigenvalues().size();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  const auto& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return ev(a).real() != ev(b).real() ? ev(a).real() > ev(b).real() : ev(a).imag() > ev(b).imag();
  });
  Eigen::VectorXcd m(n);
  for (Eigen::Index i = 0; i < n; ++i) m(i) = p.M[i];
  Eigenpairs out;
  for (Eigen::Index i : order) {
    out.values.push_back(ev(i));
    if (vectors) {
      const Eigen::VectorXcd v = es.eigenvectors().col(i);
      out.alignment.push_back(std::abs(v.dot(m)) / (v.norm() * m.norm()));
    }
  }
  return out;
}

}  // namespace

GridFunction apply_L(const GridFunction& f, const ProfilePair& p, Advection adv) {
  require_profile_grid(f, p);
  const StreamSolution F = solve_bvp(f);
  return linear_part(f, F.G, F.Gp, p, adv);
}

GridFunction apply_L_bar(const GridFunction& f, const ProfilePair& p, const WeightParams& wp,
                         Advection adv) {
  require_profile_grid(f, p);
  const GridFunction jet = taylor_part(f);
  const GridFunction ft = f - jet;
  const LocalizedStream s = solve_localized(ft, wp, BumpProfile::smooth);
  return linear_part(ft, s.corrected.G, s.corrected.Gp, p, adv) + jet;
}

GridFunction apply_L_K(const GridFunction& f, const ProfilePair& p, const WeightParams& wp,
                       Advection adv) {
  return apply_L(f, p, adv) - apply_L_bar(f, p, wp, adv);
}

GridFunction apply_N(const GridFunction& f, const GridFunction& g, const ProfilePair& p) {
  require_profile_grid(f, p);
  require_profile_grid(g, p);
  const StreamSolution F = solve_bvp(f);
  const GridFunction dg = differentiate(g, 1);
  GridFunction r = GridFunction::zeros(f.grid, Parity::even);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = -2 * F.G[i] * dg[i] + F.Gp[i] * g[i] + 2 * g[i] * F.G[i] * std::tan(f.theta(i));
  return r;
}

GridFunction OperatorMatrix::apply(const GridFunction& f) const {
  if (f.grid != grid) throw DomainError("operator and function live on different grids");
  return GridFunction(grid, entries.apply(f.values), Parity::even);
}

namespace {

template <class Column>
OperatorMatrix assemble_columns(const GridPtr& grid, OperatorLabel label, Column column) {
  const std::size_t n = grid->n();
  if (n > kMaxAssemblySize) throw MemoryGuardError("dense assembly limited to n <= 1024");
  OperatorMatrix out{grid, DenseMatrix(n, n), label};
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      GridFunction e = GridFunction::zeros(grid, Parity::even);
      for (std::size_t j = w; j < n; j += workers) {
        e[j] = 1.0;
        const GridFunction c = column(e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) out.entries(i, j) = c[i];
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace

OperatorMatrix assemble(OperatorLabel label, const ProfilePair& p, const WeightParams& wp,
                        Advection adv) {
  switch (label) {
    case OperatorLabel::L_full:
      return assemble_columns(p.M.grid, label, [&](const GridFunction& e) { return apply_L(e, p, adv); });
    case OperatorLabel::L_bar:
      return assemble_columns(p.M.grid, label,
                              [&](const GridFunction& e) { return apply_L_bar(e, p, wp, adv); });
    case OperatorLabel::L_K:
      return assemble_columns(p.M.grid, label,
                              [&](const GridFunction& e) { return apply_L_K(e, p, wp, adv); });
    case OperatorLabel::N_frozen: break;
  }
  throw DomainError("N_frozen needs a frozen argument; use assemble_frozen_N");
}

OperatorMatrix assemble_frozen_N(const GridFunction& f, const ProfilePair& p) {
  require_profile_grid(f, p);
  return assemble_columns(p.M.grid, OperatorLabel::N_frozen,
                          [&](const GridFunction& e) { return apply_N(f, e, p); });
}

std::vector<double> singular_values(const DenseMatrix& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.begin(), s.end()};
}

std::size_t numerical_rank(const DenseMatrix& a, double rel_cutoff) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double v) { return v > rel_cutoff * s.front(); }));
}

double lbar_quotient(const GridFunction& f, const ProfilePair& p, const H4TildeForm& form) {
  return form.inner(f, form.localize(apply_L_bar(f, p, form.params()))) / form.inner(f, f);
}

double symmetrized_gram_min_eigenvalue(const DenseMatrix& a, const H4TildeForm& form,
                                       std::size_t modes) {
  const GridPtr& grid = form.grid();
  if (a.rows() != grid->n() || a.cols() != grid->n())
    throw DomainError("operator matrix does not match the form's grid");
  const auto basis = sample_basis(grid, modes);
  const std::size_t m = basis.size();
  std::vector<GridFunction> images;
  for (const GridFunction& b : basis)
    images.push_back(form.localize(GridFunction(grid, a.apply(b.values), Parity::even)));
  Eigen::MatrixXd W(m, m), S(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      W(i, j) = form.inner(basis[i], basis[j]);
      S(i, j) = form.inner(basis[i], images[j]);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(0.5 * (W + W.transpose()));
  const Eigen::VectorXd& lam = gram.eigenvalues();
  Eigen::Index first = 0;
  while (first < lam.size() && lam(first) <= 1e-12 * lam(lam.size() - 1)) ++first;
  const Eigen::Index r = lam.size() - first;
  const Eigen::MatrixXd T = gram.eigenvectors().rightCols(r) *
                            lam.tail(r).cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::MatrixXd Q = T.transpose() * S * T;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Q + Q.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CoercivityReport coercivity_quotient(const ProfilePair& p, const WeightParams& wp0,
                                     std::size_t samples, std::uint64_t seed,
                                     std::size_t max_retries) {
  if (samples == 0) throw DomainError("coercivity needs at least one sample");
  const auto family = random_even_samples(p.M.grid, samples, seed);
  CoercivityReport rep;
  WeightParams wp = wp0;
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    const H4TildeForm form(p.M.grid, wp);
    std::vector<double> q;
    q.reserve(family.size());
    for (const GridFunction& f : family) q.push_back(lbar_quotient(f, p, form));
    CoercivityAttempt at;
    at.wp = wp;
    at.min_quotient = *std::min_element(q.begin(), q.end());
    at.gram_min_eigenvalue =
        symmetrized_gram_min_eigenvalue(assemble(OperatorLabel::L_bar, p, wp).entries, form);
    at.positive = at.min_quotient > 0.0 && at.gram_min_eigenvalue > 0.0;
    rep.attempts.push_back(at);
    rep.retries = attempt;
    rep.wp = wp;
    rep.min_quotient = at.min_quotient;
    rep.gram_min_eigenvalue = at.gram_min_eigenvalue;
    rep.quotients = std::move(q);
    if (at.positive) {
      rep.certified = true;
      break;
    }
    if (attempt < max_retries) wp = WeightParams::linked(p.L, 0.5 * wp.l1, 2.0 * wp.B);
  }
  constexpr std::size_t bins = 20;
  const auto [lo, hi] = std::minmax_element(rep.quotients.begin(), rep.quotients.end());
  const double width = std::max(*hi - *lo, 1e-12) / bins;
  rep.bin_counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) rep.bin_edges.push_back(*lo + width * b);
  for (double v : rep.quotients)
    ++rep.bin_counts[std::min(bins - 1, static_cast<std::size_t>((v - *lo) / width))];
  return rep;
}

SpectrumReport discrete_spectrum(const ProfilePair& p, double match_tol, Advection adv) {
  SpectrumReport rep;
  const GridKind kind = p.M.grid->kind();
  rep.n = p.M.size();
  rep.n_fine = kind == GridKind::uniform ? 2 * rep.n : 2 * rep.n - 1;
  const ProfilePair fine = continue_profile(p.seed, rep.n_fine, kind);
  const Eigenpairs coarse = eigenpairs_of_minus_L(p, adv, true);
  rep.coarse = coarse.values;
  rep.fine = eigenpairs_of_minus_L(fine, adv, false).values;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.coarse.size(); ++k) {
    const auto lam = rep.coarse[k];
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mu : rep.fine) best = std::min(best, std::abs(lam - mu));
    if (best > match_tol * std::max(1.0, std::abs(lam))) continue;
    rep.resolved.push_back(lam);
    if (lam.real() >= 0.0) ++rep.unstable;
    if (std::abs(lam - 1.0) < dist) {
      dist = std::abs(lam - 1.0);
      rep.nearest_one = lam;
      rep.nearest_one_alignment = coarse.alignment[k];
    }
  }
  const GridFunction r = apply_L(p.M, p, adv) + p.M;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.theta(i) > 0.75 * p.L) continue;
    num = std::max(num, std::abs(r[i]));
    den = std::max(den, std::abs(p.M[i]));
  }
  rep.translation_residual = num / den;
  return rep;
}

}  // namespace ipm
