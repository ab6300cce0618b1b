#pragma once

#include <optional>
#include <vector>

#include "gradflow/alg2/pointwise.hpp"
#include "gradflow/linsolve/elliptic.hpp"
#include "gradflow/physics/convolution.hpp"
#include "gradflow/physics/energy.hpp"

namespace gradflow::alg2 {

/// The scalar flow d_t rho = div(V1 grad dE/drho) - V2 dE/drho posed for
/// one-step variational time stepping. V2 == None selects the pure
/// transport specialization: no source unknown and a unit mass
/// coefficient in Step A.
struct ScalarProblem {
  physics::EnergySpec energy;
  physics::PowerMobility v1x{1.0, 1.0}, v1y{1.0, 1.0};
  physics::V2Family v2 = physics::V2Family::none();
  Alg2Params params{};

  bool has_reaction() const { return v2.active(); }
};

/// The ALG2 triple: multiplier u = (rho, m, s), dual u*, and potential Phi.
struct ScalarState {
  fem::QuadField rho, m0, m1, s;
  fem::QuadField rho_d, m0_d, m1_d, s_d;
  fem::ContinuousField phi;

  static ScalarState init(const fem::Discretization& disc,
                          const fem::QuadField& rho0);
};

struct StepMonitor {
  double energy = 0.0;
  double mass = 0.0;
  double alg_residual = 0.0;
  double min_rho = 0.0;
  int linear_iterations = 0;  // summed over the ALG loop
  std::vector<double> iter_residuals;  // filled when requested
};

/// Shifted targets ubar = D Phi + u/r evaluated at the quadrature nodes.
struct ShiftedTarget {
  fem::QuadField rho_bar, m0_bar, m1_bar, s_bar;
};

class ScalarSolver {
 public:
  ScalarSolver(const fem::Discretization& disc, const ScalarProblem& prob,
               const linsolve::LinearSolverConfig& lin = {});

  const fem::Discretization& disc() const { return disc_; }
  const ScalarProblem& problem() const { return prob_; }
  const linsolve::EllipticSolver& elliptic() const { return solver_; }

  /// Step A: updates st.phi from the current multipliers and duals.
  linsolve::SolveReport step_a(ScalarState& st,
                               const fem::QuadField& rho_old) const;

  /// ubar from the current Phi and multipliers.
  ShiftedTarget shifted_target(const ScalarState& st) const;

  /// Flux/source closures m = rV1/(r+V1) mbar (per axis), s = rV2/(r+V2) sbar.
  void recover_flux_source(double rho, double m0_bar, double m1_bar,
                           double s_bar, double& m0, double& m1,
                           double& s) const;

  /// One full JKO step of L ALG iterations; st is advanced in place and
  /// carries warm-start data into the next step. `conv` supplies the
  /// frozen interaction convolution of rho_old (computed once per step).
  StepMonitor jko_step(ScalarState& st, const fem::QuadField& rho_old,
                       double dt, const physics::Convolution* conv = nullptr,
                       bool record_iter_residuals = false) const;

  /// Assembles the per-node reduced problem at node q (exposed for the
  /// oracle tests).
  NodeProblem node_problem(int q, const ShiftedTarget& t,
                           const fem::QuadField& lin, double dt) const;

  /// Node values of V(x) + (W*rho_old)(x) for this step.
  fem::QuadField linear_coefficient(const fem::QuadField* w_rho_old) const;

 private:
  const fem::Discretization& disc_;
  ScalarProblem prob_;
  linsolve::EllipticSolver solver_;
  fem::QuadField drift_vals_;
  NodeEnergy node_energy_base_;
};

/// Nodewise dual update u* = ubar - u/r.
void update_dual(const fem::QuadField& u, const fem::QuadField& u_bar,
                 double r, fem::QuadField& u_star);

}  // namespace gradflow::alg2
