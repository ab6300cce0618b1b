#pragma once

#include <Eigen/Sparse>
#include <functional>

namespace gradflow::linsolve {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

struct PcgOptions {
  double tol = 1e-10;
  int maxit = 2000;
};

/// Action of a preconditioner: z = P^{-1} r.
using Preconditioner = std::function<Vector(const Vector&)>;

/// Returns the Jacobi (inverse-diagonal) preconditioner of A.
/// Throws if any diagonal entry is not strictly positive.
Preconditioner jacobi_preconditioner(const SparseMatrix& A);

/// Conjugate gradients for SPD systems. `x` holds the initial guess on
/// entry and the solution on exit. Non-convergence is reported through
/// the flag, not an exception.
SolveReport pcg_solve(const SparseMatrix& A, const Vector& b, Vector& x,
                      const PcgOptions& opts = {},
                      const Preconditioner& precond = nullptr);

}  // namespace gradflow::linsolve
