#include "gradflow/driver/scenario.hpp"

#include <cmath>

namespace gradflow::driver {

namespace {

using Fn = std::function<double(double, double)>;

Fn gaussian(double amp, double rate) {
  return [amp, rate](double x, double y) {
    return amp * std::exp(-rate * (x * x + y * y));
  };
}

// Steady state of the nonlinear Fokker-Planck test, mass constant C = 2.
double fokker_planck_steady_state(double x, double y) {
  const double v = (4.0 - x * x - y * y) / 3.0;
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

// Its exact mass on [-1,1]^2 via a fine fixed quadrature (the integrand
// is smooth there); used to set the constant initial density.
double fokker_planck_mass() {
  static const double mass = [] {
    const auto rule = fem::gauss_legendre_1d(24);
    const int cells = 16;
    double acc = 0.0;
    const double h = 2.0 / cells;
    for (int cy = 0; cy < cells; ++cy)
      for (int cx = 0; cx < cells; ++cx)
        for (int a = 0; a < 24; ++a)
          for (int b = 0; b < 24; ++b) {
            const double x = -1.0 + (cx + rule.nodes[a]) * h;
            const double y = -1.0 + (cy + rule.nodes[b]) * h;
            acc += fokker_planck_steady_state(x, y) * rule.weights[a] *
                   rule.weights[b] * h * h;
          }
    return acc;
  }();
  return mass;
}

Fn case234_kernel() {
  return [](double x, double y) {
    const double r2 = x * x + y * y;
    return 0.5 * r2 - 0.5 * std::log(r2);  // |x|^2/2 - log|x|
  };
}

Fn log_drift() {
  return [](double x, double y) {
    return -0.125 * std::log(x * x + y * y);  // -1/4 log|x|
  };
}

ScalarModel fokker_planck_model() {
  ScalarModel m;
  m.energy.alpha = 1.0;
  m.energy.m = 3.0;  // alpha*U_3 = rho^3/2
  m.energy.drift = [](double x, double y) { return 0.5 * (x * x + y * y); };
  const double rho0 = fokker_planck_mass() / 4.0;
  m.initial = [rho0](double, double) { return rho0; };
  m.reference = fokker_planck_steady_state;
  return m;
}

ScalarModel aggregation_model(int c) {
  ScalarModel m;
  switch (c) {
    case 1:
      m.energy.kernel = [](double x, double y) {
        const double r2 = x * x + y * y;
        return 0.25 * r2 * r2 - 0.5 * r2;
      };
      m.initial = gaussian(25.0 / (2.0 * M_PI), 12.5);
      break;
    case 2:
      m.energy.kernel = case234_kernel();
      m.energy.kernel_singular = true;
      m.initial = gaussian(25.0 / (8.0 * M_PI), 25.0 / 8.0);
      break;
    case 3:
      m.energy.kernel = case234_kernel();
      m.energy.kernel_singular = true;
      m.energy.drift = log_drift();
      m.initial = gaussian(25.0 / (8.0 * M_PI), 25.0 / 8.0);
      break;
    case 4:
      m.energy.alpha = 0.1;
      m.energy.m = 2.0;  // 0.1*rho^2
      m.energy.kernel = case234_kernel();
      m.energy.kernel_singular = true;
      m.energy.drift = log_drift();
      m.initial = gaussian(25.0 / (8.0 * M_PI), 25.0 / 8.0);
      break;
    case 5:
      m.energy.alpha = 0.2;
      m.energy.m = 3.0;  // 0.1*rho^3
      m.energy.kernel = [](double x, double y) {
        return -std::exp(-(x * x + y * y)) / M_PI;
      };
      m.initial = [](double x, double y) {
        return (std::abs(x) <= 3.0 && std::abs(y) <= 3.0) ? 0.25 : 0.0;
      };
      break;
  }
  return m;
}

physics::ReactionNetwork two_species_network(int m_expo) {
  Eigen::MatrixXi alpha(1, 2), beta(1, 2);
  alpha << 1, 2;
  beta << 0, 3;
  Eigen::VectorXd kp(1), km(1), kappa(2), gamma(2), expo(2);
  kp << 1.0;
  km << 0.1;
  kappa << 1.0, 0.1;  // kappa_1 = k+, kappa_2 = k-
  gamma << 0.2, 0.1;
  expo << static_cast<double>(m_expo), 1.0;
  return physics::ReactionNetwork(alpha, beta, kp, km, kappa, gamma, expo);
}

physics::ReactionNetwork gray_scott_network() {
  Eigen::MatrixXi alpha(3, 4), beta(3, 4);
  alpha << 1, 2, 0, 0,  //
      0, 1, 0, 0,       //
      1, 0, 0, 0;
  beta << 0, 3, 0, 0,  //
      0, 0, 1, 0,      //
      0, 0, 0, 1;
  Eigen::VectorXd kp(3), km(3), kappa(4), gamma(4);
  kp << 1.0, 8.4e-2, 2.4e-2;
  km << 1e-3, 8.4e-5, 2.4e-5;
  kappa << 1.0, 1e-3, 1e-6, 1e-3;
  gamma << 1.0, 0.01, 0.0, 0.0;
  return physics::ReactionNetwork(alpha, beta, kp, km, kappa, gamma);
}

double gs_bump_1d(double x) {
  if (x >= -1.0 && x <= 0.0) {
    const double t = x * (x + 1.0);
    return 0.15 + 0.25 * t * t;
  }
  if (x > 0.0 && x <= 1.0) {
    const double t = x * (1.0 - x);
    return 0.15 + 0.25 * t * t;
  }
  return 0.15;
}

double gs_bump_2d(double x, double y) {
  if (x < -1.0 || x > 1.0 || y < -1.0 || y > 1.0) return 0.15;
  const double tx = (x <= 0.0) ? x * (x + 1.0) : x * (1.0 - x);
  const double ty = (y <= 0.0) ? y * (y + 1.0) : y * (1.0 - y);
  return 0.15 + 4.0 * tx * tx * ty * ty;
}

SystemModel gray_scott_model(bool two_d) {
  SystemModel m{gray_scott_network(), {}};
  Fn rho2 = two_d ? Fn(gs_bump_2d)
                  : Fn([](double x, double) { return gs_bump_1d(x); });
  m.initial.push_back(
      [rho2](double x, double y) { return 1.0 - 2.0 * rho2(x, y); });
  m.initial.push_back(rho2);
  m.initial.push_back([](double, double) { return 1.0; });
  m.initial.push_back([](double, double) { return 1000.0; });
  return m;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"fokker_planck_steady", "aggregation_case1", "aggregation_case2",
          "aggregation_case3",    "aggregation_case4", "aggregation_case5",
          "reaction_type1",       "reaction_type2",    "reaction_type3",
          "fisher_kpp",           "two_species",       "gray_scott_1d",
          "gray_scott_2d"};
}

Scenario build_scenario(const ProblemConfig& cfg) {
  Scenario sc;
  sc.name = cfg.scenario;
  const std::string& name = cfg.scenario;

  if (name == "fokker_planck_steady") {
    sc.mesh = {-1, 1, -1, 1, 2, 2};
    sc.degree = 4;
    sc.dt = 1.0;
    sc.T = 10.0;
    sc.model = fokker_planck_model();
  } else if (name.rfind("aggregation_case", 0) == 0 && name.size() == 17) {
    const int c = name.back() - '0';
    if (c < 1 || c > 5) throw ConfigError("unknown scenario: " + name);
    const double L = (c == 1) ? 1.0 : (c == 5) ? 4.0 : 1.5;
    sc.mesh = {-L, L, -L, L, 32, 32};
    sc.degree = 4;
    sc.dt = (c == 5) ? 0.5 : 0.05;
    sc.T = (c == 1) ? 10.0 : (c == 5) ? 15.0 : 3.0;
    sc.model = aggregation_model(c);
  } else if (name.rfind("reaction_type", 0) == 0 && name.size() == 14) {
    const int t = name.back() - '0';
    if (t < 1 || t > 3) throw ConfigError("unknown scenario: " + name);
    sc.mesh = {-1.5, 1.5, -1.5, 1.5, 32, 32};
    sc.degree = 4;
    sc.dt = 0.05;
    sc.T = 3.0;
    ScalarModel m = aggregation_model(4);
    if (t == 1)
      m.v2 = physics::V2Family::power(0.1, 0.0);
    else if (t == 2)
      m.v2 = physics::V2Family::power(0.1, 1.0);
    else
      m.v2 = physics::V2Family::mass_action(0.1, 1.0, 0.1, 0.0);
    sc.model = std::move(m);
  } else if (name == "fisher_kpp") {
    sc.mesh = {-2, 2, -1, 1, 32, 16};
    sc.degree = 4;
    sc.dt = 0.1;
    sc.T = 4.0;
    const double mu = cfg.mu.value_or(1.0);
    if (!(mu > 0)) throw ConfigError("fisher_kpp: mu must be positive");
    ScalarModel m;
    m.energy.entropy_form = true;
    m.energy.alpha = 1.0;
    m.energy.kappa = 1.0;
    m.v1x = {0.1, 1.0};
    m.v1y = {0.01, 1.0};
    // mu*rho*(rho-1)/log(rho) fails the pointwise convexity condition.
    m.v2 = physics::V2Family::mass_action(mu, 2.0, mu, 1.0, false);
    m.nonconvex = true;
    m.initial = [](double x, double y) {
      const double q = x * x + 4.0 * y * y;
      return q <= 0.25 ? 1.0 : std::exp(-10.0 * (q - 0.25));
    };
    sc.model = std::move(m);
  } else if (name == "two_species") {
    sc.mesh = {-1, 1, -1, 1, 16, 16};
    sc.degree = 4;
    sc.dt = 0.05;
    sc.T = 2.0;
    const int me = cfg.m_exponent.value_or(1);
    if (me < 1) throw ConfigError("two_species: m must be >= 1");
    SystemModel m{two_species_network(me), {}};
    m.initial.push_back([](double x, double y) {
      return 0.5 * (1.0 - std::tanh(10.0 * (std::hypot(x, y) - 0.2)));
    });
    m.initial.push_back([](double x, double y) {
      return 0.5 * (1.0 + std::tanh(10.0 * (std::hypot(x, y) - 0.2)));
    });
    sc.model = std::move(m);
  } else if (name == "gray_scott_1d" || name == "gray_scott_2d") {
    const bool two_d = name == "gray_scott_2d";
    if (two_d) {
      sc.mesh = {-8, 8, -8, 8, 16, 16};
      sc.T = 500.0;
    } else {
      sc.mesh = {-16, 16, 0, 1, 32, 1};
      sc.T = 1600.0;
    }
    sc.degree = 4;
    sc.ramp = TimeRamp{0.01, 0.1, 40};
    sc.dt = 0.1;
    sc.model = gray_scott_model(two_d);
  } else {
    throw ConfigError("unknown scenario: " + name);
  }

  // Overrides.
  if (cfg.nx) sc.mesh.nx = *cfg.nx;
  if (cfg.ny) sc.mesh.ny = *cfg.ny;
  if (cfg.xmin) sc.mesh.xmin = *cfg.xmin;
  if (cfg.xmax) sc.mesh.xmax = *cfg.xmax;
  if (cfg.ymin) sc.mesh.ymin = *cfg.ymin;
  if (cfg.ymax) sc.mesh.ymax = *cfg.ymax;
  if (sc.mesh.nx < 1 || sc.mesh.ny < 1 || !(sc.mesh.xmax > sc.mesh.xmin) ||
      !(sc.mesh.ymax > sc.mesh.ymin))
    throw ConfigError("invalid mesh");
  if (cfg.bc)
    sc.bc = (*cfg.bc == "periodic") ? fem::BoundaryCondition::Periodic
                                    : fem::BoundaryCondition::Neumann;
  if (cfg.degree) sc.degree = *cfg.degree;
  if (sc.degree < 1) throw ConfigError("degree must be >= 1");

  if (cfg.dt) sc.dt = *cfg.dt;
  if (cfg.ramp) sc.ramp = cfg.ramp;
  if (cfg.T) sc.T = *cfg.T;
  if (cfg.steps) sc.forced_steps = cfg.steps;
  if (!(sc.dt > 0) || sc.T < 0) throw ConfigError("invalid time parameters");

  if (cfg.r) sc.params.r = *cfg.r;
  if (!(sc.params.r > 0)) throw ConfigError("alg2.r must be positive");
  if (cfg.alg_iters) sc.params.iterations = *cfg.alg_iters;
  if (sc.params.iterations < 1) throw ConfigError("alg2.iters must be >= 1");
  if (cfg.early_exit) sc.params.early_exit = *cfg.early_exit;
  if (cfg.early_exit_tol) sc.params.early_exit_tol = *cfg.early_exit_tol;
  if (cfg.newton_tol) sc.params.newton_tol = *cfg.newton_tol;
  if (cfg.newton_maxit) sc.params.newton_maxit = *cfg.newton_maxit;
  if (cfg.rho_min) sc.params.rho_min = *cfg.rho_min;

  if (cfg.lin_method) {
    if (*cfg.lin_method == "pcg")
      sc.lin.method = linsolve::LinearSolverConfig::Method::Pcg;
    else if (*cfg.lin_method == "pcg-mg")
      sc.lin.method = linsolve::LinearSolverConfig::Method::PcgMg;
    else
      sc.lin.method = linsolve::LinearSolverConfig::Method::Direct;
  }
  if (cfg.lin_tol) sc.lin.tol = *cfg.lin_tol;
  if (cfg.lin_maxit) sc.lin.maxit = *cfg.lin_maxit;

  if (cfg.conv_mode)
    sc.conv = (*cfg.conv_mode == "direct") ? physics::ConvolutionMode::Direct
                                           : physics::ConvolutionMode::Fft;
  if (cfg.split)
    sc.split = (*cfg.split == "gauss-seidel") ? alg2::Splitting::GaussSeidel
                                              : alg2::Splitting::Jacobi;
  return sc;
}

}  // namespace gradflow::driver
