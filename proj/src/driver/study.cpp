#include "gradflow/driver/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace gradflow::driver {

std::vector<StudyRow> convergence_study(const ProblemConfig& base,
                                        const std::vector<int>& degrees,
                                        int levels) {
  std::vector<StudyRow> rows;
  for (int k : degrees) {
    if (k < 1) throw ConfigError("convergence_study: degree must be >= 1");
    // Match dim V_h^k across degrees: k*nx = 8 on the coarsest level.
    const int nx0 = (8 % k == 0) ? 8 / k : 1;
    double prev_err = 0.0;
    for (int lvl = 0; lvl < levels; ++lvl) {
      ProblemConfig cfg = base;
      cfg.degree = k;
      cfg.nx = nx0 << lvl;
      cfg.ny = nx0 << lvl;
      // Keep the algebraic error below the discretization error being
      // measured; an explicit user tolerance wins.
      if (!base.lin_tol) cfg.lin_tol = 1e-12;
      const Scenario sc = build_scenario(cfg);
      if (sc.is_system() || !sc.scalar().reference)
        throw ConfigError("convergence_study: scenario '" + sc.name +
                          "' has no reference solution");
      const SimulationResult res = simulate(sc);
      StudyRow row;
      row.degree = k;
      row.dim = (k * sc.mesh.nx + 1) * (k * sc.mesh.ny + 1);
      row.error = res.disc->l2_error_elevated(res.fields[0],
                                              sc.scalar().reference, k + 4);
      row.rate = lvl == 0 ? 0.0 : std::log2(prev_err / row.error);
      prev_err = row.error;
      rows.push_back(row);
    }
  }
  return rows;
}

void print_study(const std::vector<StudyRow>& rows) {
  std::printf("%6s %10s %14s %8s\n", "degree", "dim", "L2 error", "rate");
  for (const auto& r : rows) {
    if (r.rate == 0.0)
      std::printf("%6d %10d %14.4e %8s\n", r.degree, r.dim, r.error, "--");
    else
      std::printf("%6d %10d %14.4e %8.2f\n", r.degree, r.dim, r.error, r.rate);
  }
}

void write_study_csv(const std::vector<StudyRow>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  out << "degree,dim,error,rate\n";
  for (const auto& r : rows)
    out << r.degree << ',' << r.dim << ',' << format_g17(r.error) << ','
        << format_g17(r.rate) << '\n';
}

}  // namespace gradflow::driver
