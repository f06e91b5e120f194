#include "ipm/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "ipm/errors.hpp"
#include "ipm/profile.hpp"

namespace ipm {

double root_angle(double A, int refinement) {
  if (!(A > 0.0)) throw DomainError("root_angle needs A > 0");
  SeedOptions so;
  ContinuationOptions co;
  for (int r = 0; r < refinement; ++r) {
    so.nodes *= 2;
    co.rtol /= 32.0;
    co.atol /= 32.0;
  }
  co.rtol = std::max(co.rtol, 1e-15);
  const LocalSeed seed = local_profile(A, so);
  return continue_profile(seed, 16, GridKind::clustered, co).L;
}

std::vector<SweepPoint> sweep_root_angles(const std::vector<double>& As, int refinement) {
  std::vector<std::future<double>> jobs;
  jobs.reserve(As.size());
  for (double A : As) jobs.push_back(std::async(std::launch::async, root_angle, A, refinement));
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < As.size(); ++i) out.push_back({As[i], jobs[i].get()});
  return out;
}

ShootingResult shoot(double target_L, std::pair<double, double> bracket, double L_tol) {
  if (target_L >= std::numbers::pi / 2)
    throw ImpossibleTargetError("the root angle is always below pi/2");
  if (!(target_L > 0.0)) throw DomainError("target angle must be positive");
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(lo < hi)) throw BracketError("bracket must satisfy 0 < A_lo < A_hi");

  ShootingResult res;
  res.target_L = target_L;
  const auto ends = sweep_root_angles({lo, hi});
  double L_lo = ends[0].L, L_hi = ends[1].L;
  res.sweep = ends;
  // L decreases with A: the bracket must straddle the target.
  if (!(L_lo >= target_L && L_hi <= target_L))
    throw BracketError("L(A) does not cross the target inside the bracket");

  while (!(L_lo < target_L + L_tol) && hi - lo >= 1e-10) {
    const double mid = std::sqrt(lo * hi);
    const double L_mid = root_angle(mid);
    res.sweep.push_back({mid, L_mid});
    ++res.iterations;
    if (L_mid >= target_L) {
      lo = mid;
      L_lo = L_mid;
    } else {
      hi = mid;
      L_hi = L_mid;
    }
  }
  res.A_star = lo;
  res.achieved_L = L_lo;
  std::sort(res.sweep.begin(), res.sweep.end(),
            [](const SweepPoint& a, const SweepPoint& b) { return a.A < b.A; });
  return res;
}

}  // namespace ipm
