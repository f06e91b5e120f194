#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ipm/evolution.hpp"
#include "ipm/profile.hpp"
#include "ipm/weighted_spaces.hpp"

namespace ipm {

// ℒf = f + 2G*f' + 2FM*' − G*'f − F'M* − 2M*F tanθ − 2fG* tanθ, F = bvp(f).
// M*' is the profile's nodal derivative; it is zero at θ = L where F vanishes.
// The transport derivative f' is centered (spectral) or upwinded along G*, as
// in the evolution; upwinding only changes anything on uniform grids.
GridFunction apply_L(const GridFunction& f, const ProfilePair& p,
                     Advection adv = Advection::centered);

// L̄ replaces f by f̃ = f − ℙ₂f and F by the localized G̃ = G̃_loc − G̃_nl
// (smooth bump), then adds ℙ₂f back, so L̄ is the identity on 2-jets.
GridFunction apply_L_bar(const GridFunction& f, const ProfilePair& p, const WeightParams& wp,
                         Advection adv = Advection::centered);
GridFunction apply_L_K(const GridFunction& f, const ProfilePair& p, const WeightParams& wp,
                       Advection adv = Advection::centered);

// N(f, g) = −2Fg' + F'g + 2gF tanθ, F = bvp(f), so that the s-frame
// right-hand side at M* + f equals −ℒf + N(f, f).
GridFunction apply_N(const GridFunction& f, const GridFunction& g, const ProfilePair& p);

enum class OperatorLabel { L_full, L_bar, L_K, N_frozen };

struct OperatorMatrix {
  GridPtr grid;
  DenseMatrix entries;  // column j: the operator applied to the j-th nodal basis function
  OperatorLabel label = OperatorLabel::L_full;

  GridFunction apply(const GridFunction& f) const;
};

inline constexpr std::size_t kMaxAssemblySize = 1024;
inline constexpr std::size_t kGramModes = 12;

// Columns are computed concurrently. Throws MemoryGuardError for n > 1024 and
// DomainError for N_frozen, which needs the frozen argument.
OperatorMatrix assemble(OperatorLabel label, const ProfilePair& p, const WeightParams& wp,
                        Advection adv = Advection::centered);

// g ↦ N(f, g) with f frozen.
OperatorMatrix assemble_frozen_N(const GridFunction& f, const ProfilePair& p);

// Number of singular values above rel_cutoff·σ₁.
std::size_t numerical_rank(const DenseMatrix& a, double rel_cutoff = 1e-8);
std::vector<double> singular_values(const DenseMatrix& a);

// ⟨f, L̄f⟩ / ⟨f, f⟩ in the H̃⁴ form, with L̄f localized to the form's window.
double lbar_quotient(const GridFunction& f, const ProfilePair& p, const H4TildeForm& form);

// Smallest eigenvalue of ½(Q + Qᵀ) on span sample_basis(grid, modes): with
// B the basis, W = Bᵀ⟨·,·⟩B = UΛUᵀ and S = Bᵀ⟨·, localized A·⟩B,
// Q = Λ^{-1/2}UᵀSUΛ^{-1/2}, dropping Λ below 1e-12 of its largest entry.
// This is the minimum of the quotient over the span, so it bounds every
// sample of that family from below. The full nodal space is not used: its
// grid-scale directions are unresolved by the fourth-derivative rows.
double symmetrized_gram_min_eigenvalue(const DenseMatrix& a, const H4TildeForm& form,
                                       std::size_t modes = kGramModes);

struct CoercivityAttempt {
  WeightParams wp;
  double min_quotient = 0.0;
  double gram_min_eigenvalue = 0.0;
  bool positive = false;
};

struct CoercivityReport {
  bool certified = false;
  std::size_t retries = 0;  // attempts after the first
  WeightParams wp;          // parameters of the last attempt
  double min_quotient = 0.0;
  double gram_min_eigenvalue = 0.0;
  std::vector<double> quotients;     // per sample, last attempt
  std::vector<double> bin_edges;     // histogram of quotients
  std::vector<std::size_t> bin_counts;
  std::vector<CoercivityAttempt> attempts;
};

// Samples from random_even_samples(grid, samples, seed). Retries with ℓ₁
// halved and B doubled (linked weights) up to max_retries times.
CoercivityReport coercivity_quotient(const ProfilePair& p, const WeightParams& wp,
                                     std::size_t samples = 200, std::uint64_t seed = 1,
                                     std::size_t max_retries = 4);

struct SpectrumReport {
  std::size_t n = 0, n_fine = 0;
  std::vector<std::complex<double>> coarse;    // eigenvalues of −ℒ at n
  std::vector<std::complex<double>> fine;      // at 2n − 1 (nested clustered nodes)
  std::vector<std::complex<double>> resolved;  // coarse values matched at the fine level
  std::size_t unstable = 0;                    // resolved with Re ≥ 0
  std::complex<double> nearest_one{};          // resolved eigenvalue closest to 1
  double nearest_one_alignment = 0.0;          // |cos| between its eigenvector and M*
  double translation_residual = 0.0;           // ‖(−ℒ − 1)M*‖∞ / ‖M*‖∞ on θ ≤ ¾L
};

// Eigenvalues of −ℒ at the profile's resolution and at the refined one (2n on
// uniform grids, 2n − 1 on clustered); an eigenvalue counts as resolved when
// the refined spectrum has one within match_tol·max(1, |λ|). Centered
// transport leaves a resolution-dependent band of spurious modes near the
// outflow boundary; use uniform grids with upwinding.
SpectrumReport discrete_spectrum(const ProfilePair& p, double match_tol = 1e-3,
                                 Advection adv = Advection::upwind);

}  // namespace ipm
