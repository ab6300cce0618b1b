#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <optional>

#include "gradflow/linsolve/multigrid.hpp"

namespace gradflow::linsolve {

struct LinearSolverConfig {
  enum class Method { Pcg, PcgMg, Direct };
  Method method = Method::Pcg;
  double tol = 1e-10;
  int maxit = 2000;
  GmgOptions gmg{};
};

/// Owns the constant-coefficient Step-A matrix c*M (+K) for one
/// discretization and solves against it repeatedly. PCG solves warm
/// start from the caller's vector; the Direct method is a cached sparse
/// Cholesky factorization.
class EllipticSolver {
 public:
  EllipticSolver(const fem::Discretization& disc, double mass_coeff,
                 bool with_stiffness, const LinearSolverConfig& cfg);

  const SparseMatrix& matrix() const { return A_; }

  /// Solves A x = b; `x` carries the warm start in and the solution out.
  SolveReport solve(const Vector& b, Vector& x) const;

 private:
  LinearSolverConfig cfg_;
  SparseMatrix A_;
  Preconditioner precond_;
  std::unique_ptr<GmgHierarchy> gmg_;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> chol_;
};

}  // namespace gradflow::linsolve
