#pragma once

#include <array>

#include "gradflow/physics/mobility.hpp"

namespace gradflow::alg2 {

struct Alg2Params {
  double r = 1.0;            // augmentation parameter
  int iterations = 200;      // ALG iterations per time step
  double newton_tol = 1e-12; // absolute residual target of the critical equation
  int newton_maxit = 100;
  double rho_min = 1e-12;    // clipping floor applied before any log
  double rho_max = 1e6;      // safeguard ceiling for Newton iterates
  bool early_exit = false;
  double early_exit_tol = 1e-8;
};

/// Local energy density entering one node's reduced problem. The frozen
/// convolution and the drift potential are folded into the linear
/// coefficient `lin`.
struct NodeEnergy {
  enum class Kind { None, Power, Entropy };
  Kind kind = Kind::None;
  double alpha = 0.0;
  double m = 1.0;      // Power: alpha*U_m
  double kappa = 1.0;  // Entropy: alpha*rho*(log(kappa rho)-1)
  double lin = 0.0;    // V(x) + (W*rho_old)(x)

  double value(double rho) const;
  /// Derivative with rho clipped to rho_min before logs.
  double deriv(double rho, double rho_min) const;
};

/// One quadrature node's reduced minimization problem
///   f(rho) = (rho - r rho_bar)^2/(2r)
///          + r^2 m0_bar^2/(2(r+V1x(rho))) + r^2 m1_bar^2/(2(r+V1y(rho)))
///          + sum_p r^2 s_bar_p^2/(2(r+V2p(rho)))
///          + dt * (energy density)(rho)
/// over rho >= 0.
struct NodeProblem {
  double r = 1.0;
  double dt = 0.0;
  double rho_bar = 0.0;
  double m0_bar = 0.0, m1_bar = 0.0;
  physics::PowerMobility v1x{}, v1y{};
  struct Reaction {
    physics::V2Family v2;
    double s_bar = 0.0;
  };
  std::array<Reaction, 8> reactions{};
  int n_reactions = 0;
  NodeEnergy energy{};
  double rho_min = 1e-12;
  double rho_max = 1e6;
  double newton_tol = 1e-12;
  int newton_maxit = 100;

  void add_reaction(const physics::V2Family& v2, double s_bar) {
    reactions[n_reactions++] = {v2, s_bar};
  }
};

struct NodeSolveResult {
  double rho = 0.0;
  double residual = 0.0;  // |f'(rho)|, or the one-sided derivative at 0
  bool at_boundary = false;
  int iterations = 0;
  bool bisected = false;
};

/// Objective value f(rho).
double node_objective(const NodeProblem& p, double rho);

/// First-order residual f'(rho) (the critical equation).
double node_residual(const NodeProblem& p, double rho);

/// Minimizer of f over rho >= 0 by safeguarded Newton on the critical
/// equation: iterates keep a sign-changing bracket and fall back to
/// bisection whenever a Newton step leaves it or stalls. If the
/// one-sided derivative at rho = 0 is nonnegative the boundary
/// minimizer 0 is returned. Throws std::runtime_error with node
/// diagnostics if no bracket can be established.
NodeSolveResult pointwise_density_solve(const NodeProblem& p, double rho_init);

}  // namespace gradflow::alg2
