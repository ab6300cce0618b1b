#include "gradflow/alg2/scalar.hpp"

#include <cmath>

namespace gradflow::alg2 {

ScalarState ScalarState::init(const fem::Discretization& disc,
                              const fem::QuadField& rho0) {
  ScalarState st;
  const int n = disc.num_nodes();
  st.rho = rho0;
  st.m0 = fem::QuadField::Zero(n);
  st.m1 = fem::QuadField::Zero(n);
  st.s = fem::QuadField::Zero(n);
  st.rho_d = fem::QuadField::Zero(n);
  st.m0_d = fem::QuadField::Zero(n);
  st.m1_d = fem::QuadField::Zero(n);
  st.s_d = fem::QuadField::Zero(n);
  st.phi = fem::ContinuousField::Zero(disc.num_dofs());
  return st;
}

ScalarSolver::ScalarSolver(const fem::Discretization& disc,
                           const ScalarProblem& prob,
                           const linsolve::LinearSolverConfig& lin)
    : disc_(disc),
      prob_(prob),
      solver_(disc, prob.has_reaction() ? 2.0 : 1.0, true, lin) {
  drift_vals_ = prob_.energy.drift ? disc_.interpolate(prob_.energy.drift)
                                   : fem::QuadField::Zero(disc_.num_nodes());
  node_energy_base_.lin = 0.0;
  if (prob_.energy.entropy_form) {
    node_energy_base_.kind = NodeEnergy::Kind::Entropy;
    node_energy_base_.alpha = prob_.energy.alpha;
    node_energy_base_.kappa = prob_.energy.kappa;
  } else if (prob_.energy.alpha != 0.0) {
    node_energy_base_.kind = NodeEnergy::Kind::Power;
    node_energy_base_.alpha = prob_.energy.alpha;
    node_energy_base_.m = prob_.energy.m;
  }
}

fem::QuadField ScalarSolver::linear_coefficient(
    const fem::QuadField* w_rho_old) const {
  if (w_rho_old) return drift_vals_ + *w_rho_old;
  return drift_vals_;
}

linsolve::SolveReport ScalarSolver::step_a(ScalarState& st,
                                           const fem::QuadField& rho_old) const {
  const double r = prob_.params.r;
  const auto& w = disc_.weights();
  fem::QuadField mass_coeff;
  if (prob_.has_reaction())
    mass_coeff = st.s_d - st.rho_d + (st.rho - st.s - rho_old) / r;
  else
    mass_coeff = -st.rho_d + (st.rho - rho_old) / r;
  fem::ContinuousField rhs =
      disc_.value_t(w.cwiseProduct(mass_coeff)) +
      disc_.dx_t(w.cwiseProduct(st.m0_d - st.m0 / r)) +
      disc_.dy_t(w.cwiseProduct(st.m1_d - st.m1 / r));
  return solver_.solve(rhs, st.phi);
}

ShiftedTarget ScalarSolver::shifted_target(const ScalarState& st) const {
  const double r = prob_.params.r;
  ShiftedTarget t;
  const fem::QuadField phiv = disc_.value_at_nodes(st.phi);
  t.rho_bar = -phiv + st.rho / r;
  t.m0_bar = disc_.dx_at_nodes(st.phi) + st.m0 / r;
  t.m1_bar = disc_.dy_at_nodes(st.phi) + st.m1 / r;
  if (prob_.has_reaction()) t.s_bar = phiv + st.s / r;
  return t;
}

void ScalarSolver::recover_flux_source(double rho, double m0_bar,
                                       double m1_bar, double s_bar, double& m0,
                                       double& m1, double& s) const {
  const double r = prob_.params.r;
  const double vx = prob_.v1x.value(rho);
  const double vy = prob_.v1y.value(rho);
  m0 = r * vx / (r + vx) * m0_bar;
  m1 = r * vy / (r + vy) * m1_bar;
  if (prob_.has_reaction()) {
    const double v2 = prob_.v2.value(rho);
    s = r * v2 / (r + v2) * s_bar;
  } else {
    s = 0.0;
  }
}

NodeProblem ScalarSolver::node_problem(int q, const ShiftedTarget& t,
                                       const fem::QuadField& lin,
                                       double dt) const {
  NodeProblem p;
  p.r = prob_.params.r;
  p.dt = dt;
  p.rho_bar = t.rho_bar[q];
  p.m0_bar = t.m0_bar[q];
  p.m1_bar = t.m1_bar[q];
  p.v1x = prob_.v1x;
  p.v1y = prob_.v1y;
  if (prob_.has_reaction()) p.add_reaction(prob_.v2, t.s_bar[q]);
  p.energy = node_energy_base_;
  p.energy.lin = lin[q];
  p.rho_min = prob_.params.rho_min;
  p.rho_max = prob_.params.rho_max;
  p.newton_tol = prob_.params.newton_tol;
  p.newton_maxit = prob_.params.newton_maxit;
  return p;
}

void update_dual(const fem::QuadField& u, const fem::QuadField& u_bar,
                 double r, fem::QuadField& u_star) {
  u_star = u_bar - u / r;
}

StepMonitor ScalarSolver::jko_step(ScalarState& st,
                                   const fem::QuadField& rho_old, double dt,
                                   const physics::Convolution* conv,
                                   bool record_iter_residuals) const {
  StepMonitor mon;
  const double r = prob_.params.r;
  const bool reacting = prob_.has_reaction();

  std::optional<fem::QuadField> w_rho_old;
  if (prob_.energy.has_interaction()) {
    if (!conv)
      throw std::invalid_argument(
          "jko_step: interaction energy requires a convolution operator");
    w_rho_old = conv->apply(rho_old);
  }
  const fem::QuadField lin =
      linear_coefficient(w_rho_old ? &*w_rho_old : nullptr);

  const int n = disc_.num_nodes();
  fem::QuadField rho_prev(n), m0_prev(n), m1_prev(n), s_prev(n);

  for (int ell = 0; ell < prob_.params.iterations; ++ell) {
    const auto rep = step_a(st, rho_old);
    mon.linear_iterations += rep.iterations;

    const ShiftedTarget t = shifted_target(st);
    rho_prev.swap(st.rho);
    m0_prev.swap(st.m0);
    m1_prev.swap(st.m1);
    if (reacting) s_prev.swap(st.s);

#pragma omp parallel for schedule(static)
    for (int q = 0; q < n; ++q) {
      NodeProblem p = node_problem(q, t, lin, dt);
      const auto sol = pointwise_density_solve(p, rho_prev[q]);
      double m0, m1, s;
      recover_flux_source(sol.rho, t.m0_bar[q], t.m1_bar[q],
                          reacting ? t.s_bar[q] : 0.0, m0, m1, s);
      st.rho[q] = sol.rho;
      st.m0[q] = m0;
      st.m1[q] = m1;
      if (reacting) st.s[q] = s;
    }

    update_dual(st.rho, t.rho_bar, r, st.rho_d);
    update_dual(st.m0, t.m0_bar, r, st.m0_d);
    update_dual(st.m1, t.m1_bar, r, st.m1_d);
    if (reacting) update_dual(st.s, t.s_bar, r, st.s_d);

    double rr = disc_.inner(st.rho - rho_prev, st.rho - rho_prev) +
                disc_.inner(st.m0 - m0_prev, st.m0 - m0_prev) +
                disc_.inner(st.m1 - m1_prev, st.m1 - m1_prev);
    if (reacting) rr += disc_.inner(st.s - s_prev, st.s - s_prev);
    mon.alg_residual = std::sqrt(rr);
    if (record_iter_residuals) mon.iter_residuals.push_back(mon.alg_residual);
    if (prob_.params.early_exit &&
        mon.alg_residual < prob_.params.early_exit_tol)
      break;
  }

  std::optional<fem::QuadField> w_rho_new;
  if (prob_.energy.has_interaction()) w_rho_new = conv->apply(st.rho);
  mon.energy = physics::energy_eval(disc_, prob_.energy, st.rho,
                                    w_rho_new ? &*w_rho_new : nullptr);
  mon.mass = disc_.integral(st.rho);
  mon.min_rho = st.rho.minCoeff();
  return mon;
}

}  // namespace gradflow::alg2
