#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "gradflow/alg2/scalar.hpp"
#include "gradflow/alg2/system.hpp"
#include "gradflow/driver/config.hpp"

namespace gradflow::driver {

struct ScalarModel {
  physics::EnergySpec energy;
  physics::PowerMobility v1x{1.0, 1.0}, v1y{1.0, 1.0};
  physics::V2Family v2 = physics::V2Family::none();
  std::function<double(double, double)> initial;
  std::function<double(double, double)> reference;  // steady state, if known
  bool nonconvex = false;
};

struct SystemModel {
  physics::ReactionNetwork net;
  std::vector<std::function<double(double, double)>> initial;
};

/// A fully resolved run description: every default filled in, every
/// override applied.
struct Scenario {
  std::string name;
  fem::UniformMesh mesh{};
  int degree = 4;
  fem::BoundaryCondition bc = fem::BoundaryCondition::Neumann;

  double T = 1.0;
  double dt = 0.1;
  std::optional<TimeRamp> ramp;
  std::optional<int> forced_steps;

  alg2::Alg2Params params{};
  linsolve::LinearSolverConfig lin{};
  physics::ConvolutionMode conv = physics::ConvolutionMode::Fft;
  alg2::Splitting split = alg2::Splitting::Jacobi;

  std::variant<ScalarModel, SystemModel> model;

  bool is_system() const { return std::holds_alternative<SystemModel>(model); }
  const ScalarModel& scalar() const { return std::get<ScalarModel>(model); }
  const SystemModel& system() const { return std::get<SystemModel>(model); }
};

/// Builds the named scenario with its published defaults, then applies
/// the config's overrides. Throws ConfigError for unknown names or
/// invalid parameter combinations.
Scenario build_scenario(const ProblemConfig& cfg);

std::vector<std::string> scenario_names();

}  // namespace gradflow::driver
