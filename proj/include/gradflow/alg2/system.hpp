#pragma once

#include <vector>

#include "gradflow/alg2/pointwise.hpp"
#include "gradflow/linsolve/elliptic.hpp"
#include "gradflow/physics/energy.hpp"
#include "gradflow/physics/reaction.hpp"

namespace gradflow::alg2 {

enum class Splitting { Jacobi, GaussSeidel };

/// Reversible reaction-diffusion system with detailed balance, one-step
/// variational time stepping. Species energies are the rescaled
/// entropies rho(log(kappa_i rho)-1).
struct SystemProblem {
  physics::ReactionNetwork net;
  Alg2Params params{};
  Splitting split = Splitting::Jacobi;
};

/// Densities, fluxes (diffusing species only), per-reaction sources,
/// their duals, and the per-species multipliers.
struct SystemState {
  std::vector<fem::QuadField> rho, m0, m1;
  std::vector<fem::QuadField> s;
  std::vector<fem::QuadField> rho_d, m0_d, m1_d, s_d;
  std::vector<fem::ContinuousField> phi;

  static SystemState init(const fem::Discretization& disc,
                          const physics::ReactionNetwork& net,
                          const std::vector<fem::QuadField>& rho0);
};

struct SystemStepMonitor {
  double energy = 0.0;  // total over species
  std::vector<double> mass;
  double mass_total = 0.0;
  double alg_residual = 0.0;
  double min_rho = 0.0;
  int linear_iterations = 0;
  std::vector<double> iter_residuals;
};

class SystemSolver {
 public:
  SystemSolver(const fem::Discretization& disc, const SystemProblem& prob,
               const linsolve::LinearSolverConfig& lin = {});

  const fem::Discretization& disc() const { return disc_; }
  const SystemProblem& problem() const { return prob_; }

  /// Mass coefficient of species i's Step-A operator:
  /// 1 + sum_p (alpha_i^p - beta_i^p)^2.
  double mass_coefficient(int i) const;

  /// Step A for species i. `phi_nodes` holds every species' potential
  /// evaluated at the quadrature nodes; entries of species j != i are at
  /// whatever level the splitting mode prescribes.
  linsolve::SolveReport step_a_species(
      int i, SystemState& st, const std::vector<fem::QuadField>& phi_nodes,
      const std::vector<fem::QuadField>& rho_old) const;

  /// sum_i (alpha_i^p - beta_i^p) phi_i at one node, all reactions.
  /// (Exposed for tests; the solver uses the vectorized path.)
  Eigen::VectorXd stoich_apply(const Eigen::VectorXd& phi) const;

  /// Closures m_i = r V1i/(r+V1i) mbar_i and s_p = r V2p/(r+V2p) sbar_p.
  void flux_closure(int i, double rho, double m0_bar, double m1_bar,
                    double& m0, double& m1) const;
  double source_closure(int p, const Eigen::VectorXd& rho,
                        double s_bar) const;

  /// One JKO step of L ALG iterations over the whole system.
  SystemStepMonitor jko_step(SystemState& st,
                             const std::vector<fem::QuadField>& rho_old,
                             double dt,
                             bool record_iter_residuals = false) const;

  /// Reduced problem of species i at node q with the other densities
  /// frozen at rho_frozen (exposed for the oracle tests).
  NodeProblem node_problem(int i, int q, double rho_bar, double m0_bar,
                           double m1_bar, const std::vector<double>& s_bar,
                           const Eigen::VectorXd& rho_frozen,
                           double dt) const;

  double species_energy(int i, const fem::QuadField& rho) const;

 private:
  const fem::Discretization& disc_;
  SystemProblem prob_;
  std::vector<linsolve::EllipticSolver> solvers_;
};

}  // namespace gradflow::alg2
