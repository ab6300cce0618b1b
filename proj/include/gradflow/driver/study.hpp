#pragma once

#include "gradflow/driver/runner.hpp"

namespace gradflow::driver {

struct StudyRow {
  int degree = 0;
  int dim = 0;       // dim V_h^k
  double error = 0;  // discrete L2 error against the reference
  double rate = 0;   // log2(e_coarse/e_fine); 0 on the coarsest level
};

/// Mesh-refinement study against the scenario's reference solution.
/// Levels double the mesh per step; the coarsest mesh is chosen so that
/// dim V_h^k matches across degrees (k*nx = 8 on the coarsest level).
/// Throws ConfigError when the scenario has no reference.
std::vector<StudyRow> convergence_study(const ProblemConfig& base,
                                        const std::vector<int>& degrees,
                                        int levels);

void print_study(const std::vector<StudyRow>& rows);
void write_study_csv(const std::vector<StudyRow>& rows,
                     const std::string& path);

}  // namespace gradflow::driver
