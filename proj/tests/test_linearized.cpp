#include <cmath>
#include <map>

#include "doctest.h"
#include "ipm/errors.hpp"
#include "ipm/linearized.hpp"

using namespace ipm;

namespace {

const ProfilePair& profile(std::size_t n, GridKind kind = GridKind::clustered) {
  static std::map<std::pair<std::size_t, GridKind>, ProfilePair> cache;
  auto key = std::make_pair(n, kind);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_profile(1.0, n, kind)).first;
  return it->second;
}

double max_entry(const DenseMatrix& a) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e = std::max(e, std::abs(a(i, j)));
  return e;
}

}  // namespace

TEST_CASE("linearity and zero data") {
  const auto& p = profile(96);
  const auto wp = WeightParams::linked(p.L);
  const auto zero = GridFunction::zeros(p.M.grid, Parity::even);
  CHECK(apply_L(zero, p).max_abs() == 0.0);
  CHECK(apply_L_bar(zero, p, wp).max_abs() == 0.0);
  CHECK(apply_L_K(zero, p, wp).max_abs() == 0.0);

  const auto fs = random_even_samples(p.M.grid, 2, 5);
  const GridFunction lhs = apply_L(2.0 * fs[0] - 3.0 * fs[1], p);
  const GridFunction rhs = 2.0 * apply_L(fs[0], p) - 3.0 * apply_L(fs[1], p);
  CHECK((lhs - rhs).max_abs() <= 1e-10 * std::max(1.0, rhs.max_abs()));
  const GridFunction bl = apply_L_bar(2.0 * fs[0] - 3.0 * fs[1], p, wp);
  const GridFunction br = 2.0 * apply_L_bar(fs[0], p, wp) - 3.0 * apply_L_bar(fs[1], p, wp);
  CHECK((bl - br).max_abs() <= 1e-10 * std::max(1.0, br.max_abs()));

  auto odd = GridFunction::sample(p.M.grid, [](double t) { return t; }, Parity::odd);
  CHECK_THROWS_AS(apply_L(odd, p), ParityError);
  const auto other = GridFunction::zeros(profile(64).M.grid, Parity::even);
  CHECK_THROWS_AS(apply_L(other, p), DomainError);
}

TEST_CASE("L bar on jets") {
  const auto& p = profile(96);
  const auto wp = WeightParams::linked(p.L);
  for (auto jet : {+[](double t) { return t * t; }, +[](double t) { return 3.0 - 2.0 * t * t; }}) {
    auto f = GridFunction::sample(p.M.grid, jet, Parity::even);
    CHECK((apply_L_bar(f, p, wp) - f).max_abs() <= 1e-10);
  }

  // θ⁴ has no jet, so neither does its image. The image is read on the form's
  // window; globally it carries the Hölder endpoint of M*.
  const auto& pf = profile(192);
  const H4TildeForm form(pf.M.grid, wp);
  auto q = GridFunction::sample(pf.M.grid, [](double t) { return std::pow(t, 4); }, Parity::even);
  const GridFunction img = apply_L_bar(q, pf, wp);
  CHECK(std::abs(img[0]) <= 1e-12);
  const TaylorJet j = taylor_jet(form.localize(img), 2);
  CHECK(std::abs(j.values[0]) <= 1e-10);
  CHECK(std::abs(j.values[2]) <= 1e-6);

  // Jet pass-through for generic data.
  for (const auto& f : random_even_samples(pf.M.grid, 5, 2)) {
    const TaylorJet a = taylor_jet(form.localize(apply_L_bar(f, pf, wp)), 2);
    const TaylorJet b = taylor_jet(f, 2);
    CHECK(std::abs(a.values[0] - b.values[0]) <= 1e-10);
    CHECK(std::abs(a.values[2] - b.values[2]) <= 1e-6 * std::max(1.0, std::abs(b.values[2])));
  }
}

TEST_CASE("finite-difference linearization of the s-frame right-hand side") {
  const auto& p = profile(96);
  const GridFunction L = apply_L(p.M, p);
  const auto bg = Background::from_profile(p);
  auto rhs = [&](const GridFunction& m) { return rhs_logarithmic(m, bg.get(), Advection::centered); };
  const double eps = 1e-5;
  const GridFunction one_sided = (1.0 / eps) * (rhs((1.0 + eps) * p.M) - rhs(p.M));
  CHECK((one_sided + L).max_abs() <= 1e-4 * L.max_abs());
  const GridFunction central = (0.5 / eps) * (rhs((1.0 + eps) * p.M) - rhs((1.0 - eps) * p.M));
  CHECK((central + L).max_abs() <= 1e-6 * L.max_abs());

  // Without the background split the right-hand side rebuilds G and M' from
  // the Hölder profile, and the discrepancy only shrinks with resolution.
  std::vector<double> generic;
  for (std::size_t n : {96u, 192u}) {
    const auto& q = profile(n);
    auto r = [&](const GridFunction& m) { return rhs_logarithmic(m, nullptr, Advection::centered); };
    const GridFunction d = (0.5 / eps) * (r((1.0 + eps) * q.M) - r((1.0 - eps) * q.M)) + apply_L(q.M, q);
    generic.push_back(d.max_abs() / apply_L(q.M, q).max_abs());
  }
  MESSAGE("generic-path discrepancy " << generic[0] << " -> " << generic[1]);
  CHECK(generic[1] < 0.5 * generic[0]);
  CHECK(generic[1] <= 1e-3);
}

TEST_CASE("nonlinear decomposition identity") {
  const auto& p = profile(96);
  const auto bg = Background::from_profile(p);
  const auto fs = random_even_samples(p.M.grid, 20, 3);
  for (const auto& s : fs) {
    const GridFunction f = 0.1 * s;
    const GridFunction lhs = rhs_logarithmic(p.M + f, bg.get(), Advection::centered);
    const GridFunction rhs = apply_N(f, f, p) - apply_L(f, p);
    CHECK((lhs - rhs).max_abs() <= 1e-9);
  }
  const GridFunction N = apply_N(fs[0], fs[1], p);
  CHECK((apply_N(2.0 * fs[0], 3.0 * fs[1], p) - 6.0 * N).max_abs() <= 1e-12 * std::max(1.0, 6.0 * N.max_abs()));
  const auto zero = GridFunction::zeros(p.M.grid, Parity::even);
  CHECK(apply_N(zero, fs[1], p).max_abs() == 0.0);
  CHECK(apply_N(fs[0], zero, p).max_abs() == 0.0);

  const OperatorMatrix Nf = assemble_frozen_N(fs[0], p);
  CHECK(Nf.label == OperatorLabel::N_frozen);
  CHECK((Nf.apply(fs[1]) - N).max_abs() <= 1e-9 * std::max(1.0, N.max_abs()));
}

TEST_CASE("assembly and the finite-rank part") {
  std::vector<std::size_t> ranks;
  for (std::size_t n : {96u, 192u}) {
    const auto& p = profile(n);
    const auto wp = WeightParams::linked(p.L);
    const OperatorMatrix A = assemble(OperatorLabel::L_full, p, wp);
    const OperatorMatrix B = assemble(OperatorLabel::L_bar, p, wp);
    const OperatorMatrix K = assemble(OperatorLabel::L_K, p, wp);
    DenseMatrix d = A.entries - B.entries;
    d -= K.entries;
    CHECK(max_entry(d) <= 1e-10 * std::max(1.0, max_entry(A.entries)));
    CHECK((A.apply(p.M) - apply_L(p.M, p)).max_abs() <= 1e-9 * apply_L(p.M, p).max_abs());
    ranks.push_back(numerical_rank(K.entries));
    const auto sv = singular_values(K.entries);
    MESSAGE("n " << n << ": rank(L_K) " << ranks.back() << ", sigma " << sv[0] << " " << sv[1]
                 << " " << sv[2] << " " << sv[3]);
  }
  CHECK(ranks[0] <= 8);
  CHECK(ranks[1] <= 8);
  CHECK(ranks[0] + 1 >= ranks[1]);
  CHECK(ranks[1] + 1 >= ranks[0]);

  CHECK_THROWS_AS(assemble(OperatorLabel::N_frozen, profile(96), WeightParams::linked(profile(96).L)),
                  DomainError);
  auto big = AngularGrid::clustered(1.0, kMaxAssemblySize + 1);
  ProfilePair fake = profile(96);
  fake.M = GridFunction::zeros(big, Parity::even);
  CHECK_THROWS_AS(assemble(OperatorLabel::L_full, fake, WeightParams::linked(1.0)), MemoryGuardError);

  DenseMatrix id(3, 3);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1.0;
  CHECK(numerical_rank(id) == 3);
  CHECK(numerical_rank(DenseMatrix(3, 3)) == 0);
}

TEST_CASE("coercivity of L bar") {
  const auto& p = profile(192);
  const auto wp = WeightParams::linked(p.L);
  const H4TildeForm form(p.M.grid, wp);
  auto one = GridFunction::sample(p.M.grid, [](double) { return 1.0; }, Parity::even);
  // Exact up to roundoff of the jet extraction, amplified by the B·θ⁻⁸ rows.
  CHECK(std::abs(lbar_quotient(one, p, form) - 1.0) <= 1e-7);

  const CoercivityReport rep = coercivity_quotient(p, wp, 200, 1);
  MESSAGE("min quotient " << rep.min_quotient << ", gram " << rep.gram_min_eigenvalue
                          << ", retries " << rep.retries);
  CHECK(rep.certified);
  CHECK(rep.retries == 0);
  CHECK(rep.min_quotient > 0.0);
  CHECK(rep.gram_min_eigenvalue > 0.0);
  REQUIRE(rep.quotients.size() == 200);
  // The span holds every sample, so its minimum bounds the samples from below.
  CHECK(rep.gram_min_eigenvalue <= rep.min_quotient + 1e-9);
  std::size_t total = 0;
  for (auto c : rep.bin_counts) total += c;
  CHECK(total == 200);
  CHECK(rep.bin_edges.size() == rep.bin_counts.size() + 1);
  CHECK(rep.bin_edges.front() == rep.min_quotient);

  const CoercivityReport again = coercivity_quotient(p, wp, 200, 1);
  CHECK(again.quotients == rep.quotients);
  CHECK_THROWS_AS(coercivity_quotient(p, wp, 0, 1), DomainError);
}

TEST_CASE("coercivity retries shrink the local region") {
  // Under-resolved on purpose: the default weights fail at n = 64.
  const auto& p = profile(64);
  const auto wp = WeightParams::linked(p.L);
  const CoercivityReport rep = coercivity_quotient(p, wp, 20, 1, 2);
  REQUIRE(rep.attempts.size() == rep.retries + 1);
  CHECK(rep.attempts.size() <= 3);
  for (std::size_t i = 1; i < rep.attempts.size(); ++i) {
    CHECK(rep.attempts[i].wp.l1 == doctest::Approx(0.5 * rep.attempts[i - 1].wp.l1));
    CHECK(rep.attempts[i].wp.B == doctest::Approx(2.0 * rep.attempts[i - 1].wp.B));
  }
  CHECK(rep.certified == rep.attempts.back().positive);
  CHECK(rep.wp.l1 == rep.attempts.back().wp.l1);
}

TEST_CASE("discrete spectrum") {
  const auto& p = profile(128, GridKind::uniform);
  const SpectrumReport s = discrete_spectrum(p);
  CHECK(s.n == 128);
  CHECK(s.n_fine == 256);
  CHECK(s.coarse.size() == 128);
  CHECK(s.fine.size() == 256);
  CHECK(std::abs(s.nearest_one - 1.0) <= 1e-4);
  CHECK(s.nearest_one_alignment >= 0.999);
  CHECK(s.translation_residual <= 1e-3);
  CHECK(s.unstable == 1);
  CHECK(s.resolved.size() < 20);
  MESSAGE("resolved " << s.resolved.size() << ", translation eigenvalue " << s.nearest_one.real()
                      << ", residual " << s.translation_residual);

  // ℒM* = −M*: the translation mode solves the eigen-equation directly.
  const GridFunction r = apply_L(p.M, p, Advection::upwind) + p.M;
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r.theta(i) <= 0.75 * p.L) worst = std::max(worst, std::abs(r[i]));
  CHECK(worst <= 1e-3 * p.M.max_abs());
}
