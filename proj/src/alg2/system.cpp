#include "gradflow/alg2/system.hpp"

#include <cmath>
#include <limits>

namespace gradflow::alg2 {

SystemState SystemState::init(const fem::Discretization& disc,
                              const physics::ReactionNetwork& net,
                              const std::vector<fem::QuadField>& rho0) {
  const int M = net.species(), R = net.reactions();
  const int n = disc.num_nodes();
  SystemState st;
  st.rho = rho0;
  st.rho_d.assign(M, fem::QuadField::Zero(n));
  st.m0.assign(M, fem::QuadField());
  st.m1.assign(M, fem::QuadField());
  st.m0_d.assign(M, fem::QuadField());
  st.m1_d.assign(M, fem::QuadField());
  for (int i = 0; i < M; ++i)
    if (net.diffusing(i)) {
      st.m0[i] = fem::QuadField::Zero(n);
      st.m1[i] = fem::QuadField::Zero(n);
      st.m0_d[i] = fem::QuadField::Zero(n);
      st.m1_d[i] = fem::QuadField::Zero(n);
    }
  st.s.assign(R, fem::QuadField::Zero(n));
  st.s_d.assign(R, fem::QuadField::Zero(n));
  st.phi.assign(M, fem::ContinuousField::Zero(disc.num_dofs()));
  return st;
}

SystemSolver::SystemSolver(const fem::Discretization& disc,
                           const SystemProblem& prob,
                           const linsolve::LinearSolverConfig& lin)
    : disc_(disc), prob_(prob) {
  solvers_.reserve(prob_.net.species());
  for (int i = 0; i < prob_.net.species(); ++i)
    solvers_.emplace_back(disc_, mass_coefficient(i), prob_.net.diffusing(i),
                          lin);
}

double SystemSolver::mass_coefficient(int i) const {
  double c = 1.0;
  for (int p = 0; p < prob_.net.reactions(); ++p) {
    const double w = prob_.net.stoich_diff(p, i);
    c += w * w;
  }
  return c;
}

Eigen::VectorXd SystemSolver::stoich_apply(const Eigen::VectorXd& phi) const {
  const auto& net = prob_.net;
  Eigen::VectorXd out(net.reactions());
  for (int p = 0; p < net.reactions(); ++p) {
    double acc = 0.0;
    for (int i = 0; i < net.species(); ++i)
      acc += net.stoich_diff(p, i) * phi[i];
    out[p] = acc;
  }
  return out;
}

linsolve::SolveReport SystemSolver::step_a_species(
    int i, SystemState& st, const std::vector<fem::QuadField>& phi_nodes,
    const std::vector<fem::QuadField>& rho_old) const {
  const auto& net = prob_.net;
  const double r = prob_.params.r;
  const auto& w = disc_.weights();

  fem::QuadField mass = -st.rho_d[i] + (st.rho[i] - rho_old[i]) / r;
  for (int p = 0; p < net.reactions(); ++p) {
    const double wip = net.stoich_diff(p, i);
    if (wip == 0.0) continue;
    mass += wip * (st.s_d[p] - st.s[p] / r);
    for (int j = 0; j < net.species(); ++j) {
      if (j == i) continue;
      const double wjp = net.stoich_diff(p, j);
      if (wjp == 0.0) continue;
      mass -= wip * wjp * phi_nodes[j];
    }
  }
  fem::ContinuousField rhs = disc_.value_t(w.cwiseProduct(mass));
  if (net.diffusing(i)) {
    rhs += disc_.dx_t(w.cwiseProduct(st.m0_d[i] - st.m0[i] / r)) +
           disc_.dy_t(w.cwiseProduct(st.m1_d[i] - st.m1[i] / r));
  }
  return solvers_[i].solve(rhs, st.phi[i]);
}

NodeProblem SystemSolver::node_problem(int i, int q, double rho_bar,
                                       double m0_bar, double m1_bar,
                                       const std::vector<double>& s_bar,
                                       const Eigen::VectorXd& rho_frozen,
                                       double dt) const {
  const auto& net = prob_.net;
  NodeProblem p;
  p.r = prob_.params.r;
  p.dt = dt;
  p.rho_bar = rho_bar;
  p.rho_min = prob_.params.rho_min;
  p.rho_max = prob_.params.rho_max;
  p.newton_tol = prob_.params.newton_tol;
  p.newton_maxit = prob_.params.newton_maxit;
  if (net.diffusing(i)) {
    p.m0_bar = m0_bar;
    p.m1_bar = m1_bar;
    p.v1x = net.v1(i);
    p.v1y = net.v1(i);
  }
  for (int rx = 0; rx < net.reactions(); ++rx)
    if (net.participates(rx, i))
      p.add_reaction(net.mobility_in_species(rx, i, rho_frozen), s_bar[rx]);
  p.energy.kind = NodeEnergy::Kind::Entropy;
  p.energy.alpha = 1.0;
  p.energy.kappa = net.kappa(i);
  (void)q;
  return p;
}

double SystemSolver::species_energy(int i, const fem::QuadField& rho) const {
  physics::EnergySpec spec;
  spec.entropy_form = true;
  spec.alpha = 1.0;
  spec.kappa = prob_.net.kappa(i);
  return physics::energy_eval(disc_, spec, rho);
}

void SystemSolver::flux_closure(int i, double rho, double m0_bar,
                                double m1_bar, double& m0, double& m1) const {
  const double r = prob_.params.r;
  const double v = prob_.net.v1(i).value(rho);
  m0 = r * v / (r + v) * m0_bar;
  m1 = r * v / (r + v) * m1_bar;
}

double SystemSolver::source_closure(int p, const Eigen::VectorXd& rho,
                                    double s_bar) const {
  const double r = prob_.params.r;
  const double v2 = prob_.net.mobility(p, rho);
  return r * v2 / (r + v2) * s_bar;
}

SystemStepMonitor SystemSolver::jko_step(
    SystemState& st, const std::vector<fem::QuadField>& rho_old, double dt,
    bool record_iter_residuals) const {
  const auto& net = prob_.net;
  const int M = net.species(), R = net.reactions();
  const int n = disc_.num_nodes();
  const double r = prob_.params.r;

  SystemStepMonitor mon;
  std::vector<fem::QuadField> phi_nodes(M), phi_dx(M), phi_dy(M);
  std::vector<fem::QuadField> rho_prev(M), m0_prev(M), m1_prev(M), s_prev(R);
  std::vector<fem::QuadField> rho_bar(M), m0_bar(M), m1_bar(M), s_bar(R);

  for (int ell = 0; ell < prob_.params.iterations; ++ell) {
    // Step A, component-split. Jacobi uses every potential at the
    // previous level; Gauss-Seidel refreshes the node values of already
    // updated species.
    for (int i = 0; i < M; ++i) phi_nodes[i] = disc_.value_at_nodes(st.phi[i]);
    for (int i = 0; i < M; ++i) {
      const auto rep = step_a_species(i, st, phi_nodes, rho_old);
      mon.linear_iterations += rep.iterations;
      if (prob_.split == Splitting::GaussSeidel)
        phi_nodes[i] = disc_.value_at_nodes(st.phi[i]);
    }

    // Shifted targets from the fresh potentials.
    for (int i = 0; i < M; ++i) {
      phi_nodes[i] = disc_.value_at_nodes(st.phi[i]);
      rho_bar[i] = -phi_nodes[i] + st.rho[i] / r;
      if (net.diffusing(i)) {
        m0_bar[i] = disc_.dx_at_nodes(st.phi[i]) + st.m0[i] / r;
        m1_bar[i] = disc_.dy_at_nodes(st.phi[i]) + st.m1[i] / r;
      }
    }
    for (int p = 0; p < R; ++p) {
      s_bar[p] = st.s[p] / r;
      for (int i = 0; i < M; ++i) {
        const double wip = net.stoich_diff(p, i);
        if (wip != 0.0) s_bar[p] += wip * phi_nodes[i];
      }
    }

    for (int i = 0; i < M; ++i) rho_prev[i] = st.rho[i];
    for (int i = 0; i < M; ++i)
      if (net.diffusing(i)) {
        m0_prev[i] = st.m0[i];
        m1_prev[i] = st.m1[i];
      }
    for (int p = 0; p < R; ++p) s_prev[p] = st.s[p];

    // Step B: per-species pointwise solves with the co-species frozen at
    // the previous ALG level, then closures with the updated densities.
#pragma omp parallel
    {
    std::vector<double> sb(R);
    Eigen::VectorXd frozen(M);
#pragma omp for schedule(static)
    for (int q = 0; q < n; ++q) {
      for (int j = 0; j < M; ++j) frozen[j] = rho_prev[j][q];
      for (int p = 0; p < R; ++p) sb[p] = s_bar[p][q];
      for (int i = 0; i < M; ++i) {
        NodeProblem np = node_problem(
            i, q, rho_bar[i][q], net.diffusing(i) ? m0_bar[i][q] : 0.0,
            net.diffusing(i) ? m1_bar[i][q] : 0.0, sb, frozen, dt);
        const auto sol = pointwise_density_solve(np, rho_prev[i][q]);
        st.rho[i][q] = sol.rho;
      }
      // Closures at the fully updated densities.
      for (int i = 0; i < M; ++i) {
        if (!net.diffusing(i)) continue;
        flux_closure(i, st.rho[i][q], m0_bar[i][q], m1_bar[i][q],
                     st.m0[i][q], st.m1[i][q]);
      }
      for (int j = 0; j < M; ++j) frozen[j] = st.rho[j][q];
      for (int p = 0; p < R; ++p)
        st.s[p][q] = source_closure(p, frozen, s_bar[p][q]);
    }
    }

    // Dual updates u* = ubar - u/r.
    for (int i = 0; i < M; ++i) {
      st.rho_d[i] = rho_bar[i] - st.rho[i] / r;
      if (net.diffusing(i)) {
        st.m0_d[i] = m0_bar[i] - st.m0[i] / r;
        st.m1_d[i] = m1_bar[i] - st.m1[i] / r;
      }
    }
    for (int p = 0; p < R; ++p) st.s_d[p] = s_bar[p] - st.s[p] / r;

    double rr = 0.0;
    for (int i = 0; i < M; ++i) {
      rr += disc_.inner(st.rho[i] - rho_prev[i], st.rho[i] - rho_prev[i]);
      if (net.diffusing(i)) {
        rr += disc_.inner(st.m0[i] - m0_prev[i], st.m0[i] - m0_prev[i]);
        rr += disc_.inner(st.m1[i] - m1_prev[i], st.m1[i] - m1_prev[i]);
      }
    }
    for (int p = 0; p < R; ++p)
      rr += disc_.inner(st.s[p] - s_prev[p], st.s[p] - s_prev[p]);
    mon.alg_residual = std::sqrt(rr);
    if (record_iter_residuals) mon.iter_residuals.push_back(mon.alg_residual);
    if (prob_.params.early_exit &&
        mon.alg_residual < prob_.params.early_exit_tol)
      break;
  }

  mon.mass.resize(M);
  mon.min_rho = std::numeric_limits<double>::max();
  for (int i = 0; i < M; ++i) {
    mon.energy += species_energy(i, st.rho[i]);
    mon.mass[i] = disc_.integral(st.rho[i]);
    mon.mass_total += mon.mass[i];
    mon.min_rho = std::min(mon.min_rho, st.rho[i].minCoeff());
  }
  return mon;
}

}  // namespace gradflow::alg2
