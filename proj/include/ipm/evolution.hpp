#pragma once

#include <memory>
#include <vector>

#include "ipm/biot_savart.hpp"
#include "ipm/profile.hpp"

namespace ipm {

enum class Frame { physical_t, logarithmic_s };
// Discretization of M' in the transport term. Centered stencils carry
// undamped parasitic waves that run against the flow; the default biases
// uniform-grid stencils upwind of the velocity 2G.
enum class Advection { upwind, centered };

// Exact nodal profile data; M'·G products vanish at L by convention.
struct Background {
  GridFunction M, Mp, G, Gp;
  static std::shared_ptr<const Background> from_profile(const ProfilePair& p);
};
using BackgroundPtr = std::shared_ptr<const Background>;

// The state variable is M = P / cosθ in both frames. With a background the
// unknown is split as M = k·M* + f, k = 1 in the s-frame and 1/(1−t) in the
// t-frame, and every product with M*' uses the stored nodal values.
struct EvolutionState {
  double time = 0.0;
  Frame frame = Frame::logarithmic_s;
  GridFunction M;
  StreamSolution stream;
  BackgroundPtr background;
  Advection advection = Advection::upwind;

  GridFunction density() const;  // P in the t-frame, M in the s-frame
  GridFunction P() const;        // M cosθ
};

EvolutionState make_state(GridFunction M, Frame frame, double time = 0.0,
                          BackgroundPtr background = nullptr,
                          Advection advection = Advection::upwind);

// −2GM' + G'M + 2MG tanθ with G from the boundary-value stream solver.
GridFunction transport_rhs(const GridFunction& M, const Background* bg = nullptr,
                           double bg_scale = 1.0, StreamSolution* stream = nullptr,
                           Advection adv = Advection::upwind);

// ∂_t P for P = M cosθ.
GridFunction rhs_physical(const GridFunction& P, Advection adv = Advection::upwind);
// ∂_s M = −M − 2GM' + G'M + 2MG tanθ.
GridFunction rhs_logarithmic(const GridFunction& M, const Background* bg = nullptr,
                             Advection adv = Advection::upwind);

// RK4 Courant limits of the two stencils, in units of min spacing / max|2G|.
inline constexpr double kCflConstant = 2.0;
inline constexpr double kCflUpwind = 1.0;
double cfl_limit(const EvolutionState& s);

// One RK4 step; throws StepSizeError past the CFL limit and BlowupReached on
// non-finite values.
EvolutionState step(const EvolutionState& s, double dt);

struct BlowupDiagnostics {
  std::vector<double> times;
  std::vector<double> sup_density;           // ‖P‖∞ in physical units
  std::vector<double> accumulated_gradient;  // ∫_0^t ‖∂θ P‖∞ dt'
  std::vector<double> sup_perturbation;      // ‖M − k M*‖∞ when a background is set
  bool blowup = false;
  double blowup_time = 0.0;
};

struct RunOptions {
  double dt = 1e-2;
  double t_end = 1.0;  // in the state's own time variable
  double blowup_sup = 1e6;
  double dt_min = 1e-12;
};

struct EvolutionRun {
  EvolutionState final;
  BlowupDiagnostics diag;
};

// Steps with dt = min(requested, 0.9·CFL limit). In the t-frame the run ends
// at t_end or at blow-up, whichever comes first.
EvolutionRun evolve(EvolutionState init, const RunOptions& opt);

// χ_a(θ) = η((L − θ)/(2a)) with the smooth bump: 1 on [L − a, L], 0 below L − 2a.
GridFunction truncation_cutoff(const GridPtr& grid, double a);

struct DecayResult {
  std::vector<double> s;
  std::vector<double> sup_norm;   // ‖M(s) − M*‖∞
  std::vector<double> h4tilde;    // discrete H̃⁴ norm of M(s) − M*
  EvolutionState final;
  bool decayed = false;           // sup norm at s_max below its initial value
  bool blowup = false;            // run stopped early on non-finite data
  double late_rate = 0.0;         // d log‖M − M*‖∞ / ds over the last unit of s
};

DecayResult run_decay_experiment(const ProfilePair& p, double cutoff_a, double s_max,
                                 double dt = 1e-2);

}  // namespace ipm
