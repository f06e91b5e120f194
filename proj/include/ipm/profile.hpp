#pragma once

#include <vector>

#include "ipm/angular_grid.hpp"
#include "ipm/fixed_point.hpp"

namespace ipm {

// Local solution near θ = 0:
//   M = 4 − Aθ² + θ⁴m,  G = θ − cθ³ + θ⁵g,  c = (A+2)/3,  h = θg'.
struct LocalSeed {
  double A = 0.0;
  double a = 0.0;
  GridFunction m;  // even, on [0, a]
  GridFunction g;  // even, on [0, a]
  GridFunction h;  // even, on [0, a]
  double C1A = 0.0;  // printed constants
  double C2A = 0.0;
  double C1 = 0.0;   // constants the solver uses
  double C2 = 0.0;
  FixedPointSolution fixed_point;

  struct State {
    double M, G, Gp, Mp, I1, I2;
  };
  State at(double theta) const;
};

struct SeedOptions {
  double a_cap = 0.2;
  std::size_t nodes = 24;
  double tol = 1e-12;
};

LocalSeed local_profile(double A, const SeedOptions& opt = {});

struct PrintedConstants {
  double C1A, C2A;
};
PrintedConstants printed_forcing_constants(double A);

struct ContinuationOptions {
  double rtol = 1e-13;
  double atol = 1e-16;
  double g_stop = 1e-14;  // stop once G and M are both this small (relative)
  double m_stop = 1e-12;
  double tau_max = 400.0;
};

struct ContinuationSample {
  double theta, M, G, Gp, I1, I2;
};

// States of the continued profile at increasing θ ≤ π/2; throws NoRootError if
// G vanishes before the last requested angle.
std::vector<ContinuationSample> trace_continuation(const LocalSeed& seed,
                                                   const std::vector<double>& thetas,
                                                   const ContinuationOptions& opt = {});

struct ProfileDiagnostics {
  double GpL_state = 0.0;  // G' carried by the integrator at the stop point
  double GpL_314 = 0.0;    // cos2L(1+I1) + sin2L I2
  double GpL_317 = 0.0;    // I2(L)/sin2L
  double theta_stop = 0.0;
  double M_stop = 0.0;
  double G_stop = 0.0;
  double max_Mp = 0.0;
  double holder_regularity = 0.0;  // min(1, α)
  std::size_t steps = 0;
};

struct ProfilePair {
  double A = 0.0;
  double L = 0.0;
  GridFunction M, G, Gp, Mp, I1, I2;
  double GpL = 0.0;
  double holder_alpha = 0.0;
  LocalSeed seed;
  ProfileDiagnostics diag;
};

ProfilePair continue_profile(const LocalSeed& seed, std::size_t n = 256,
                             GridKind kind = GridKind::clustered,
                             const ContinuationOptions& opt = {});

ProfilePair build_profile(double A, std::size_t n = 256, GridKind kind = GridKind::clustered);

// max |(G' + 2G tanθ)' − M' cos²θ − sec²θ I2| over nodes θ ≤ cutoff·L.
double monotonicity_identity_residual(const GridFunction& M, const GridFunction& Gp,
                                      const GridFunction& G, const GridFunction& Mp,
                                      const GridFunction& I2, double cutoff = 0.75);
double monotonicity_identity_residual(const ProfilePair& p, double cutoff = 0.75);

// Least-squares slope of log M against log(L − θ) over nodes with
// L − θ ≤ 10·min(L − θ).
double fit_boundary_exponent(const GridFunction& M, double L);
double fit_boundary_exponent(const ProfilePair& p);

// M + 2GM' − G'M − 2MG tanθ at the nodes.
GridFunction profile_residual(const ProfilePair& p);

}  // namespace ipm
