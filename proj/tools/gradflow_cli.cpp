#include <CLI11.hpp>

#include <iostream>

#include "gradflow/driver/runner.hpp"
#include "gradflow/driver/study.hpp"

using namespace gradflow;

namespace {

struct CommonFlags {
  std::string out_dir;
  int degree = 0;
  std::string mesh;
  double dt = 0.0;
  int steps = 0;
  int alg_iters = 0;
  double r = 0.0;
  std::string conv, split;
  bool vtk = false;
  int every = 0;
  bool progress = false;

  void attach(CLI::App* app) {
    app->add_option("--out", out_dir, "output directory");
    app->add_option("--degree", degree, "polynomial degree k");
    app->add_option("--mesh", mesh, "mesh size NX or NXxNY");
    app->add_option("--dt", dt, "time step size");
    app->add_option("--steps", steps, "run exactly N steps");
    app->add_option("--alg-iters", alg_iters, "ALG iterations per step");
    app->add_option("--r", r, "augmented Lagrangian parameter");
    app->add_option("--conv", conv, "convolution mode: direct|fft")
        ->check(CLI::IsMember({"direct", "fft"}));
    app->add_option("--split", split, "system splitting: jacobi|gs")
        ->check(CLI::IsMember({"jacobi", "gs"}));
    app->add_flag("--vtk", vtk, "also write legacy VTK snapshots");
    app->add_option("--every", every, "snapshot cadence in steps");
    app->add_flag("--progress", progress, "print per-step progress");
  }

  void apply(driver::ProblemConfig& cfg) const {
    if (!out_dir.empty()) driver::apply_config_entry(cfg, "output.dir", out_dir);
    if (degree > 0)
      driver::apply_config_entry(cfg, "space.degree", std::to_string(degree));
    if (!mesh.empty()) {
      const auto x = mesh.find('x');
      const std::string nx = mesh.substr(0, x);
      const std::string ny = x == std::string::npos ? nx : mesh.substr(x + 1);
      driver::apply_config_entry(cfg, "mesh.nx", nx);
      driver::apply_config_entry(cfg, "mesh.ny", ny);
    }
    if (dt > 0.0)
      driver::apply_config_entry(cfg, "time.dt", driver::format_g17(dt));
    if (steps > 0)
      driver::apply_config_entry(cfg, "time.steps", std::to_string(steps));
    if (alg_iters > 0)
      driver::apply_config_entry(cfg, "alg2.iters", std::to_string(alg_iters));
    if (r > 0.0) driver::apply_config_entry(cfg, "alg2.r", driver::format_g17(r));
    if (!conv.empty()) driver::apply_config_entry(cfg, "convolution.mode", conv);
    if (!split.empty()) driver::apply_config_entry(cfg, "system.split", split);
    if (vtk) driver::apply_config_entry(cfg, "output.vtk", "true");
    if (every > 0)
      driver::apply_config_entry(cfg, "output.every", std::to_string(every));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradflow: variational time stepping for gradient flows and "
               "reversible reaction-diffusion systems"};
  app.require_subcommand(1);

  std::string run_config, study_config;
  CommonFlags run_flags, study_flags;
  std::string degrees_arg = "1,2,4";
  int levels = 4;

  CLI::App* run = app.add_subcommand("run", "advance a scenario in time");
  run->add_option("config", run_config, "config file")->required();
  run_flags.attach(run);

  CLI::App* study =
      app.add_subcommand("study", "mesh convergence study against a reference");
  study->add_option("config", study_config, "config file")->required();
  study->add_option("--degrees", degrees_arg, "comma-separated degree list");
  study->add_option("--levels", levels, "number of refinement levels");
  study_flags.attach(study);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      driver::ProblemConfig cfg = driver::parse_config(run_config);
      run_flags.apply(cfg);
      const driver::Scenario sc = driver::build_scenario(cfg);
      driver::RunOptions opts;
      opts.write_files = true;
      opts.out_dir = cfg.out_dir;
      opts.output_every = cfg.output_every.value_or(run_flags.every);
      opts.vtk = cfg.vtk;
      opts.lattice = cfg.lattice.value_or(129);
      opts.quiet = !run_flags.progress;
      opts.config_echo = cfg.raw;
      return driver::run_command(sc, opts);
    }
    if (study->parsed()) {
      driver::ProblemConfig cfg = driver::parse_config(study_config);
      study_flags.apply(cfg);
      std::vector<int> degrees;
      std::stringstream ss(degrees_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) degrees.push_back(std::stoi(tok));
      const auto rows = driver::convergence_study(cfg, degrees, levels);
      driver::print_study(rows);
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        driver::write_study_csv(
            rows, (std::filesystem::path(cfg.out_dir) / "study.csv").string());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
