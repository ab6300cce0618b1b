#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "gradflow/fem/assembly.hpp"
#include "gradflow/linsolve/pcg.hpp"

namespace gradflow::linsolve {

struct GmgOptions {
  int pre_smooth = 3;
  int post_smooth = 3;
  double jacobi_weight = 0.6;
  int levels = 0;  // 0 = halve as long as both nx and ny stay even
};

/// Geometric multigrid hierarchy for the constant-coefficient operator
/// c*M + K on nested uniform meshes (each level halves nx and ny; the
/// Q^k space on the coarse mesh is a subspace of the fine one).
class GmgHierarchy {
 public:
  GmgHierarchy(const fem::UniformMesh& fine_mesh, int degree,
               fem::BoundaryCondition bc, double mass_coeff,
               bool with_stiffness, const GmgOptions& opts = {});

  int levels() const { return static_cast<int>(matrices_.size()); }
  const SparseMatrix& matrix() const { return matrices_.front(); }

  /// One V-cycle with damped Jacobi smoothing, starting from x0.
  Vector vcycle(const Vector& b, const Vector& x0) const;

  /// Adapter usable as a PCG preconditioner (V-cycle from zero).
  Preconditioner preconditioner() const;

 private:
  void cycle(int level, const Vector& b, Vector& x) const;

  GmgOptions opts_;
  std::vector<SparseMatrix> matrices_;
  std::vector<Vector> inv_diag_;
  std::vector<SparseMatrix> prolong_;  // prolong_[l]: level l+1 -> level l
  Eigen::LDLT<Eigen::MatrixXd> coarse_solver_;
};

}  // namespace gradflow::linsolve
