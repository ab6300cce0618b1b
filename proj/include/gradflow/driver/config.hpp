#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "gradflow/alg2/system.hpp"
#include "gradflow/physics/convolution.hpp"

namespace gradflow::driver {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeRamp {
  double dt_begin = 0.0;
  double dt_end = 0.0;
  int steps = 0;

  /// Geometric ramp: step n (1-based) gets dt_begin*(dt_end/dt_begin)^
  /// ((n-1)/(steps-1)), constant dt_end afterwards.
  double dt_at(int step) const;
};

/// Scenario parameters as read from file/flags. Unset optionals fall
/// back to the per-scenario defaults when the scenario is built.
struct ProblemConfig {
  std::string scenario;

  std::optional<int> nx, ny;
  std::optional<double> xmin, xmax, ymin, ymax;
  std::optional<std::string> bc;  // "neumann" | "periodic"
  std::optional<int> degree;

  std::optional<double> dt;
  std::optional<TimeRamp> ramp;
  std::optional<double> T;
  std::optional<int> steps;

  std::optional<double> r;
  std::optional<int> alg_iters;
  std::optional<bool> early_exit;
  std::optional<double> early_exit_tol;
  std::optional<double> newton_tol;
  std::optional<int> newton_maxit;
  std::optional<double> rho_min;

  std::optional<std::string> lin_method;  // "pcg" | "pcg-mg" | "direct"
  std::optional<double> lin_tol;
  std::optional<int> lin_maxit;

  std::optional<std::string> conv_mode;  // "fft" | "direct"
  std::optional<std::string> split;      // "jacobi" | "gauss-seidel"

  std::string out_dir = "out";
  std::optional<int> output_every;
  bool vtk = false;
  std::optional<int> lattice;

  // Scenario-specific knobs.
  std::optional<double> mu;         // fisher_kpp reaction coefficient
  std::optional<int> m_exponent;    // two_species porous-medium power

  /// Raw key/value pairs in file order, echoed into the run manifest.
  std::map<std::string, std::string> raw;
};

/// Line-based "key = value" file with [section] headers. Unknown keys
/// are rejected with their line number; values are syntax-checked here
/// and range-checked when the scenario is built.
ProblemConfig parse_config(const std::string& path);

/// Applies one "section.key" (or bare "scenario") assignment; shared by
/// the file parser and the CLI overrides.
void apply_config_entry(ProblemConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace gradflow::driver
