#include "gradflow/driver/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gradflow::driver {

namespace fs = std::filesystem;

std::vector<double> time_steps(const Scenario& sc) {
  std::vector<double> dts;
  if (sc.forced_steps) {
    for (int n = 1; n <= *sc.forced_steps; ++n)
      dts.push_back(sc.ramp ? sc.ramp->dt_at(n) : sc.dt);
    return dts;
  }
  double t = 0.0;
  int n = 1;
  const double eps = 1e-12 * std::max(1.0, sc.T);
  while (t < sc.T - eps) {
    double dt = sc.ramp ? sc.ramp->dt_at(n) : sc.dt;
    if (t + dt > sc.T) dt = sc.T - t;
    dts.push_back(dt);
    t += dt;
    ++n;
  }
  return dts;
}

namespace {

std::vector<std::string> field_names(const Scenario& sc) {
  if (!sc.is_system()) return {"rho"};
  std::vector<std::string> names;
  for (int i = 0; i < sc.system().net.species(); ++i)
    names.push_back("rho_" + std::to_string(i + 1));
  return names;
}

void write_snapshot(const fem::Discretization& disc,
                    const std::vector<fem::QuadField>& fields,
                    const std::vector<std::string>& names,
                    const RunOptions& opts, int step) {
  char tag[16];
  std::snprintf(tag, sizeof(tag), "%06d", step);
  std::vector<const fem::QuadField*> ptrs;
  for (const auto& f : fields) ptrs.push_back(&f);
  const fs::path dir(opts.out_dir);
  write_field_csv(disc, ptrs, names, opts.lattice, opts.lattice,
                  (dir / ("fields_" + std::string(tag) + ".csv")).string());
  write_state_csv(disc, ptrs, names,
                  (dir / ("state_" + std::string(tag) + ".csv")).string());
  if (opts.vtk)
    write_field_vtk(disc, ptrs, names, opts.lattice, opts.lattice,
                    (dir / ("fields_" + std::string(tag) + ".vtk")).string());
}

void write_manifest(const Scenario& sc, const RunOptions& opts,
                    const std::vector<double>& dts) {
  nlohmann::json j;
  j["program"] = "gradflow";
  j["version"] = "1.0.0";
  j["scenario"] = sc.name;
  j["mesh"] = {{"nx", sc.mesh.nx},     {"ny", sc.mesh.ny},
               {"xmin", sc.mesh.xmin}, {"xmax", sc.mesh.xmax},
               {"ymin", sc.mesh.ymin}, {"ymax", sc.mesh.ymax}};
  j["bc"] = sc.bc == fem::BoundaryCondition::Periodic ? "periodic" : "neumann";
  j["degree"] = sc.degree;
  j["time"] = {{"T", sc.T}, {"dt", sc.dt}, {"steps", dts.size()}};
  if (sc.ramp)
    j["time"]["dt_ramp"] = {{"begin", sc.ramp->dt_begin},
                            {"end", sc.ramp->dt_end},
                            {"steps", sc.ramp->steps}};
  j["alg2"] = {{"r", sc.params.r},
               {"iters", sc.params.iterations},
               {"early_exit", sc.params.early_exit},
               {"early_exit_tol", sc.params.early_exit_tol},
               {"newton_tol", sc.params.newton_tol},
               {"newton_maxit", sc.params.newton_maxit},
               {"rho_min", sc.params.rho_min},
               {"rho_max", sc.params.rho_max}};
  const char* method = sc.lin.method == linsolve::LinearSolverConfig::Method::Pcg
                           ? "pcg"
                           : sc.lin.method ==
                                     linsolve::LinearSolverConfig::Method::PcgMg
                                 ? "pcg-mg"
                                 : "direct";
  j["linsolve"] = {{"method", method},
                   {"tol", sc.lin.tol},
                   {"maxit", sc.lin.maxit}};
  j["convolution"] =
      sc.conv == physics::ConvolutionMode::Fft ? "fft" : "direct";
  j["split"] =
      sc.split == alg2::Splitting::Jacobi ? "jacobi" : "gauss-seidel";
  j["output"] = {{"dir", opts.out_dir},
                 {"every", opts.output_every},
                 {"vtk", opts.vtk},
                 {"lattice", opts.lattice}};
#ifdef _OPENMP
  j["threads"] = omp_get_max_threads();
#else
  j["threads"] = 1;
#endif
  j["config"] = opts.config_echo;
  std::ofstream out(fs::path(opts.out_dir) / "manifest.json");
  out << j.dump(2) << '\n';
}

struct Timings {
  std::vector<std::pair<int, double>> rows;
  void add(int step, double sec) { rows.emplace_back(step, sec); }
  void write(const std::string& path) const {
    std::ofstream out(path);
    out << "step,wall_seconds\n";
    for (const auto& [s, t] : rows) out << s << ',' << t << '\n';
  }
};

}  // namespace

SimulationResult simulate(const Scenario& sc, const RunOptions& opts) {
  SimulationResult result;
  result.disc = std::make_shared<fem::Discretization>(sc.mesh, sc.degree, sc.bc);
  const fem::Discretization& disc = *result.disc;
  const std::vector<double> dts = time_steps(sc);
  const std::vector<std::string> names = field_names(sc);

  if (opts.write_files) {
    fs::create_directories(opts.out_dir);
    write_manifest(sc, opts, dts);
  }

  Timings timings;
  auto flush_files = [&](int n_species) {
    if (!opts.write_files) return;
    write_monitors_csv(result.rows, n_species,
                       (fs::path(opts.out_dir) / "monitors.csv").string());
    timings.write((fs::path(opts.out_dir) / "timings.csv").string());
  };

  const bool snapshots_on = opts.write_files;
  auto maybe_snapshot = [&](int step, bool final_step) {
    if (!snapshots_on) return;
    const bool cadence =
        opts.output_every > 0 && step % opts.output_every == 0;
    if (step == 0 || final_step || cadence)
      write_snapshot(disc, result.fields, names, opts, step);
  };

  try {
    if (!sc.is_system()) {
      const ScalarModel& model = sc.scalar();
      if (model.nonconvex && !opts.quiet)
        std::cerr << "notice: scenario '" << sc.name
                  << "' has a nonconvex pointwise problem; using the "
                     "configured small time step\n";
      alg2::ScalarProblem prob;
      prob.energy = model.energy;
      prob.v1x = model.v1x;
      prob.v1y = model.v1y;
      prob.v2 = model.v2;
      prob.params = sc.params;
      alg2::ScalarSolver solver(disc, prob, sc.lin);
      std::unique_ptr<physics::Convolution> conv;
      if (model.energy.has_interaction())
        conv = std::make_unique<physics::Convolution>(
            disc, model.energy.kernel, model.energy.kernel_singular, sc.conv);

      fem::QuadField rho = disc.interpolate(model.initial);
      alg2::ScalarState st = alg2::ScalarState::init(disc, rho);
      result.fields = {rho};

      std::optional<fem::QuadField> w0;
      if (conv) w0 = conv->apply(rho);
      MonitorRow row0;
      row0.energy = physics::energy_eval(disc, model.energy, rho,
                                         w0 ? &*w0 : nullptr);
      row0.mass = {disc.integral(rho)};
      row0.mass_total = row0.mass[0];
      row0.min_rho = rho.minCoeff();
      result.rows.push_back(row0);
      maybe_snapshot(0, dts.empty());

      double t = 0.0;
      for (std::size_t n = 0; n < dts.size(); ++n) {
        const auto tic = std::chrono::steady_clock::now();
        fem::QuadField rho_old = st.rho;
        auto mon = solver.jko_step(st, rho_old, dts[n], conv.get(),
                                   opts.record_iter_residuals);
        t += dts[n];
        MonitorRow row;
        row.step = static_cast<int>(n + 1);
        row.time = t;
        row.energy = mon.energy;
        row.mass = {mon.mass};
        row.mass_total = mon.mass;
        row.alg_residual = mon.alg_residual;
        row.min_rho = mon.min_rho;
        result.rows.push_back(row);
        if (opts.record_iter_residuals)
          result.iter_residuals.push_back(std::move(mon.iter_residuals));
        result.fields = {st.rho};
        result.steps_done = row.step;
        timings.add(row.step,
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - tic)
                        .count());
        maybe_snapshot(row.step, n + 1 == dts.size());
        if (!opts.quiet)
          std::cerr << "step " << row.step << "/" << dts.size() << " t=" << t
                    << " energy=" << row.energy << "\n";
      }
      flush_files(1);
    } else {
      const SystemModel& model = sc.system();
      const int M = model.net.species();
      alg2::SystemProblem prob{model.net, sc.params, sc.split};
      alg2::SystemSolver solver(disc, prob, sc.lin);

      std::vector<fem::QuadField> rho;
      for (int i = 0; i < M; ++i) rho.push_back(disc.interpolate(model.initial[i]));
      alg2::SystemState st = alg2::SystemState::init(disc, model.net, rho);
      result.fields = rho;

      MonitorRow row0;
      row0.mass.resize(M);
      row0.min_rho = std::numeric_limits<double>::max();
      for (int i = 0; i < M; ++i) {
        row0.energy += solver.species_energy(i, rho[i]);
        row0.mass[i] = disc.integral(rho[i]);
        row0.mass_total += row0.mass[i];
        row0.min_rho = std::min(row0.min_rho, rho[i].minCoeff());
      }
      result.rows.push_back(row0);
      maybe_snapshot(0, dts.empty());

      double t = 0.0;
      for (std::size_t n = 0; n < dts.size(); ++n) {
        const auto tic = std::chrono::steady_clock::now();
        std::vector<fem::QuadField> rho_old = st.rho;
        auto mon = solver.jko_step(st, rho_old, dts[n],
                                   opts.record_iter_residuals);
        t += dts[n];
        MonitorRow row;
        row.step = static_cast<int>(n + 1);
        row.time = t;
        row.energy = mon.energy;
        row.mass = mon.mass;
        row.mass_total = mon.mass_total;
        row.alg_residual = mon.alg_residual;
        row.min_rho = mon.min_rho;
        result.rows.push_back(row);
        if (opts.record_iter_residuals)
          result.iter_residuals.push_back(std::move(mon.iter_residuals));
        result.fields = st.rho;
        result.steps_done = row.step;
        timings.add(row.step,
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - tic)
                        .count());
        maybe_snapshot(row.step, n + 1 == dts.size());
        if (!opts.quiet)
          std::cerr << "step " << row.step << "/" << dts.size() << " t=" << t
                    << " energy=" << row.energy << "\n";
      }
      flush_files(M);
    }
  } catch (...) {
    // Flush what we have so a failed run still leaves its monitors.
    flush_files(sc.is_system() ? sc.system().net.species() : 1);
    throw;
  }
  return result;
}

int run_command(const Scenario& sc, const RunOptions& opts) {
  try {
    simulate(sc, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gradflow::driver
