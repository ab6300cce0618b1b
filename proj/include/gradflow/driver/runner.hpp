#pragma once

#include <functional>
#include <memory>

#include "gradflow/driver/fieldio.hpp"
#include "gradflow/driver/scenario.hpp"

namespace gradflow::driver {

struct RunOptions {
  bool write_files = false;
  std::string out_dir = "out";
  int output_every = 0;  // 0: initial and final snapshots only
  bool vtk = false;
  int lattice = 129;
  bool record_iter_residuals = false;
  bool quiet = true;  // suppress per-step progress on stderr
  std::map<std::string, std::string> config_echo;  // raw config for manifest
};

struct SimulationResult {
  std::vector<MonitorRow> rows;
  std::vector<fem::QuadField> fields;        // final densities, per species
  std::vector<std::vector<double>> iter_residuals;  // per step, if recorded
  std::shared_ptr<fem::Discretization> disc;
  int steps_done = 0;
};

/// Runs the scenario's time loop. Snapshots and monitor/manifest files
/// are written when opts.write_files is set; the in-memory result is
/// always returned. Numerical failures propagate as exceptions after
/// the partial monitors have been flushed (when writing files).
SimulationResult simulate(const Scenario& sc, const RunOptions& opts = {});

/// Number of steps and the per-step dt schedule of a scenario.
std::vector<double> time_steps(const Scenario& sc);

/// CLI entry: runs, writes outputs, converts failures to a nonzero exit
/// status with a message on stderr.
int run_command(const Scenario& sc, const RunOptions& opts);

}  // namespace gradflow::driver
