#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gradflow/alg2/scalar.hpp"
#include "gradflow/driver/scenario.hpp"
#include "node_problem_gen.hpp"

using namespace gradflow;
using alg2::NodeEnergy;
using alg2::NodeProblem;
using fem::BoundaryCondition;
using fem::Discretization;
using fem::UniformMesh;


TEST_CASE("pointwise solve trivial cases") {
  NodeProblem p;
  p.r = 1.0;
  p.rho_bar = 2.0;
  auto res = alg2::pointwise_density_solve(p, 0.5);
  CHECK(res.rho == doctest::Approx(2.0).epsilon(1e-12));

  // Minimizer of (rho+1)^2/2 over rho >= 0 sits on the boundary.
  NodeProblem pb;
  pb.rho_bar = -1.0;
  res = alg2::pointwise_density_solve(pb, 0.5);
  CHECK(res.rho == 0.0);
  CHECK(res.at_boundary);
  CHECK(res.residual >= 0.0);
}

TEST_CASE("pointwise solve with transport mobility matches its equation") {
  // (rho - 1) = 1/(2(1+rho)^2), reference value ~1.1121.
  NodeProblem p;
  p.r = 1.0;
  p.rho_bar = 1.0;
  p.m0_bar = 1.0;
  p.v1x = {1.0, 1.0};
  p.v1y = {1.0, 1.0};
  const auto res = alg2::pointwise_density_solve(p, 1.0);
  const double oracle = testgen::oracle_bisect(p);
  CHECK(std::abs(res.rho - oracle) < 1e-11);
  CHECK(res.rho == doctest::Approx(1.1121).epsilon(2e-4));
  CHECK(std::abs(res.rho - 1.0 -
                 1.0 / (2.0 * (1.0 + res.rho) * (1.0 + res.rho))) < 1e-10);
}

TEST_CASE("pointwise solve entropy fixed point at rho = 1") {
  // rho - rho_bar + 0.1 log(rho) = 0 with rho_bar = 1.
  NodeProblem p;
  p.r = 1.0;
  p.rho_bar = 1.0;
  p.dt = 1.0;
  p.energy.kind = NodeEnergy::Kind::Power;
  p.energy.alpha = 0.1;
  p.energy.m = 1.0;
  p.energy.lin = -0.1;  // cancels the +alpha from U_1' = log rho + 1
  const auto res = alg2::pointwise_density_solve(p, 2.0);
  CHECK(res.rho == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pointwise Newton matches the bisection oracle") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> init_dist(0.0, 3.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const NodeProblem p = testgen::random_node_problem(rng);
    const auto res = alg2::pointwise_density_solve(p, init_dist(rng));
    const double oracle = testgen::oracle_bisect(p);
    CHECK(std::abs(res.rho - oracle) <= 1e-9);
    CHECK(alg2::node_objective(p, res.rho) <=
          alg2::node_objective(p, oracle) + 1e-12);
    if (!res.at_boundary)
      CHECK(res.residual <= 1e-10);
    else
      CHECK(res.residual >= -1e-10);
  }
}

TEST_CASE("critical equation is the derivative of the objective") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> pos(0.05, 5.0);
  for (int rep = 0; rep < 300; ++rep) {
    const NodeProblem p = testgen::random_node_problem(rng);
    const double rho = pos(rng);
    const double h = 1e-6 * std::max(1.0, rho);
    const double fd =
        (alg2::node_objective(p, rho + h) - alg2::node_objective(p, rho - h)) /
        (2 * h);
    CHECK(alg2::node_residual(p, rho) == doctest::Approx(fd).epsilon(2e-5));
  }
}

TEST_CASE("convexity guard for admissible mobilities") {
  // Second variation of the reduced problem stays >= 1/r for
  // V2 = c rho^gamma (0 <= gamma <= 1) and the log-mean families.
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> pos(0.01, 10.0);
  std::uniform_real_distribution<double> sym(-3.0, 3.0);
  std::uniform_real_distribution<double> gam(0.0, 1.0);
  const double r = 1.0;
  for (int rep = 0; rep < 1000; ++rep) {
    physics::V2Family v2;
    if (rep % 2 == 0)
      v2 = physics::V2Family::power(pos(rng), gam(rng));
    else
      v2 = physics::V2Family::mass_action(pos(rng), 1.0, pos(rng), 0.0);
    const double rho = pos(rng);
    const double mb = sym(rng), sb = sym(rng);
    const double mbar2 = mb * mb;
    const double sbar2 = sb * sb;
    const double dt = 0.05;
    const double alpha = 0.1, m = 2.0;

    const double h = 1e-5 * std::max(1.0, rho);
    const double v = v2.value(rho);
    const double dv = v2.deriv(rho);
    const double ddv = (v2.deriv(rho + h) - v2.deriv(rho - h)) / (2 * h);
    const double flux = r * r * mbar2 / std::pow(r + rho, 3);  // V1 = rho
    const double reac = r * r * sbar2 * (2 * dv * dv - (r + v) * ddv) /
                        (2 * std::pow(r + v, 3));
    const double diff =
        alpha * dt * m * (m - 1.0) * std::pow(rho, m - 2.0) / (m - 1.0);
    const double hess = 1.0 / r + flux + reac + diff;
    CHECK(hess >= 1.0 / r - 1e-12);
  }
}

TEST_CASE("recover_flux_source closures") {
  const UniformMesh mesh(-1, 1, -1, 1, 2, 2);
  const Discretization disc(mesh, 1, BoundaryCondition::Neumann);
  alg2::ScalarProblem prob;
  prob.v1x = {1.0, 1.0};
  prob.v1y = {1.0, 1.0};
  SUBCASE("pure transport: s stays zero") {
    const alg2::ScalarSolver solver(disc, prob);
    double m0, m1, s;
    solver.recover_flux_source(0.0, 5.0, -3.0, 7.0, m0, m1, s);
    CHECK(m0 == 0.0);
    CHECK(m1 == 0.0);
    CHECK(s == 0.0);
    solver.recover_flux_source(1.0, 2.0, 0.0, 0.0, m0, m1, s);
    CHECK(m0 == doctest::Approx(1.0));
    CHECK(m1 == 0.0);
  }
  SUBCASE("reaction closure") {
    prob.v2 = physics::V2Family::power(1.0, 1.0);
    const alg2::ScalarSolver solver(disc, prob);
    double m0, m1, s;
    solver.recover_flux_source(3.0, 0.0, 0.0, 2.0, m0, m1, s);
    CHECK(s == doctest::Approx(2.0 * 3.0 / 4.0));
  }
}

TEST_CASE("dual update identity") {
  const int n = 64;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  fem::QuadField u(n), ubar(n), ustar(n);
  for (int i = 0; i < n; ++i) {
    u[i] = val(rng);
    ubar[i] = val(rng);
  }
  const double r = 2.0;
  alg2::update_dual(u, ubar, r, ustar);
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(u[i] + r * ustar[i] - r * ubar[i]) < 1e-14);

  alg2::update_dual((r * ubar).eval(), ubar, r, ustar);
  CHECK(ustar.norm() == 0.0);
  alg2::update_dual(fem::QuadField::Zero(n).eval(), ubar, r, ustar);
  CHECK((ustar - ubar).norm() == 0.0);
}

TEST_CASE("step A: zero data gives zero potential") {
  const UniformMesh mesh(-1, 1, -1, 1, 4, 4);
  const Discretization disc(mesh, 2, BoundaryCondition::Neumann);
  alg2::ScalarProblem prob;
  prob.v2 = physics::V2Family::power(0.1, 1.0);
  const alg2::ScalarSolver solver(disc, prob);
  auto st =
      alg2::ScalarState::init(disc, fem::QuadField::Zero(disc.num_nodes()));
  const auto rep = solver.step_a(st, fem::QuadField::Zero(disc.num_nodes()));
  CHECK(rep.converged);
  CHECK(st.phi.norm() == 0.0);
}

TEST_CASE("step A: manufactured solution converges at rate k+1") {
  auto phi_ex = [](double x, double y) {
    return std::cos(M_PI * x) * std::cos(M_PI * y);
  };
  for (int k : {1, 2}) {
    std::vector<double> errs;
    for (int n : {4, 8, 16}) {
      const UniformMesh mesh(-1, 1, -1, 1, n, n);
      const Discretization disc(mesh, k, BoundaryCondition::Neumann);
      alg2::ScalarProblem prob;
      prob.v2 = physics::V2Family::power(0.1, 1.0);  // reaction mode: 2M + K
      linsolve::LinearSolverConfig lin;
      lin.tol = 1e-13;
      const alg2::ScalarSolver solver(disc, prob, lin);
      auto st = alg2::ScalarState::init(
          disc, fem::QuadField::Zero(disc.num_nodes()));
      // RHS functional ((2+2pi^2) phi_ex, Psi)_h enters through s*.
      st.s_d = disc.interpolate([&](double x, double y) {
        return (2.0 + 2.0 * M_PI * M_PI) * phi_ex(x, y);
      });
      solver.step_a(st, fem::QuadField::Zero(disc.num_nodes()));
      errs.push_back(disc.l2_error(disc.value_at_nodes(st.phi), phi_ex));
    }
    const double rate1 = std::log2(errs[0] / errs[1]);
    const double rate2 = std::log2(errs[1] / errs[2]);
    CHECK(rate1 > k + 0.5);
    CHECK(rate2 > k + 0.7);
  }
}

TEST_CASE("step A: dual data D(phi_ex) reproduces phi_ex") {
  auto phi_ex = [](double x, double y) {
    return std::cos(M_PI * x) * std::cos(M_PI * y);
  };
  const UniformMesh mesh(-1, 1, -1, 1, 8, 8);
  const Discretization disc(mesh, 3, BoundaryCondition::Neumann);
  alg2::ScalarProblem prob;
  prob.v2 = physics::V2Family::power(0.1, 1.0);
  linsolve::LinearSolverConfig lin;
  lin.tol = 1e-13;
  const alg2::ScalarSolver solver(disc, prob, lin);
  auto st =
      alg2::ScalarState::init(disc, fem::QuadField::Zero(disc.num_nodes()));
  st.rho_d =
      disc.interpolate([&](double x, double y) { return -phi_ex(x, y); });
  st.s_d = disc.interpolate(phi_ex);
  st.m0_d = disc.interpolate([&](double x, double y) {
    return -M_PI * std::sin(M_PI * x) * std::cos(M_PI * y);
  });
  st.m1_d = disc.interpolate([&](double x, double y) {
    return -M_PI * std::cos(M_PI * x) * std::sin(M_PI * y);
  });
  solver.step_a(st, fem::QuadField::Zero(disc.num_nodes()));
  CHECK(disc.l2_error(disc.value_at_nodes(st.phi), phi_ex) < 2e-4);
}

TEST_CASE("jko_step: steady state persists and mass is conserved") {
  driver::ProblemConfig cfg;
  cfg.scenario = "fokker_planck_steady";
  cfg.nx = 4;
  cfg.ny = 4;
  cfg.degree = 3;
  const driver::Scenario sc = driver::build_scenario(cfg);
  const Discretization disc(sc.mesh, sc.degree, sc.bc);
  const auto& model = sc.scalar();
  alg2::ScalarProblem prob;
  prob.energy = model.energy;
  prob.v1x = model.v1x;
  prob.v1y = model.v1y;
  prob.params = sc.params;
  const alg2::ScalarSolver solver(disc, prob);

  const fem::QuadField rho_steady = disc.interpolate(model.reference);
  auto st = alg2::ScalarState::init(disc, rho_steady);
  const double mass0 = disc.integral(rho_steady);
  const auto mon = solver.jko_step(st, rho_steady, 1.0, nullptr, true);
  CHECK(std::sqrt(disc.inner(st.rho - rho_steady, st.rho - rho_steady)) <
        1e-6);
  CHECK(std::abs(mon.mass - mass0) <= 1e-5 * mass0);
  CHECK(mon.min_rho >= 0.0);

  // Residual trend: medians over windows of 10 are nonincreasing.
  const auto& res = mon.iter_residuals;
  REQUIRE(res.size() == 200);
  std::vector<double> medians;
  for (std::size_t w = 0; w + 10 <= res.size(); w += 10) {
    std::vector<double> win(res.begin() + w, res.begin() + w + 10);
    std::nth_element(win.begin(), win.begin() + 5, win.end());
    medians.push_back(win[5]);
  }
  for (std::size_t i = 1; i < medians.size(); ++i)
    CHECK(medians[i] <= medians[i - 1] * (1.0 + 1e-9));
}

TEST_CASE("jko_step: entropy decays from the flat initial state") {
  driver::ProblemConfig cfg;
  cfg.scenario = "fokker_planck_steady";
  cfg.nx = 4;
  cfg.ny = 4;
  cfg.degree = 2;
  const driver::Scenario sc = driver::build_scenario(cfg);
  const Discretization disc(sc.mesh, sc.degree, sc.bc);
  const auto& model = sc.scalar();
  alg2::ScalarProblem prob;
  prob.energy = model.energy;
  prob.params = sc.params;
  const alg2::ScalarSolver solver(disc, prob);

  fem::QuadField rho = disc.interpolate(model.initial);
  auto st = alg2::ScalarState::init(disc, rho);
  double prev_energy = physics::energy_eval(disc, model.energy, rho);
  const double mass0 = disc.integral(rho);
  for (int n = 0; n < 3; ++n) {
    const fem::QuadField rho_old = st.rho;
    const auto mon = solver.jko_step(st, rho_old, 1.0);
    CHECK(mon.energy <= prev_energy + 1e-6 * (1.0 + std::abs(prev_energy)));
    CHECK(std::abs(mon.mass - mass0) <= 1e-5 * mass0);
    CHECK(mon.min_rho >= 0.0);
    prev_energy = mon.energy;
  }
}
