#pragma once

#include <utility>
#include <vector>

namespace ipm {

struct SweepPoint {
  double A;
  double L;
};

struct ShootingResult {
  double target_L = 0.0;
  double A_star = 0.0;
  double achieved_L = 0.0;
  int iterations = 0;
  std::vector<SweepPoint> sweep;  // every evaluated (A, L), sorted by A
};

// refinement r doubles the seed collocation nodes r times and divides the
// continuation tolerances by 32^r (halving the dopri5 step length).
double root_angle(double A, int refinement = 0);

// L(A) for each A, evaluated concurrently.
std::vector<SweepPoint> sweep_root_angles(const std::vector<double>& As, int refinement = 0);

inline const std::vector<double>& default_sweep() {
  static const std::vector<double> As{4.0, 2.0, 1.0, 0.5, 0.1, 0.01};
  return As;
}

ShootingResult shoot(double target_L, std::pair<double, double> bracket = {1e-3, 8.0},
                     double L_tol = 1e-4);

}  // namespace ipm
