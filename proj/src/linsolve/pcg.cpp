#include "gradflow/linsolve/pcg.hpp"

#include <cmath>
#include <stdexcept>

namespace gradflow::linsolve {

Preconditioner jacobi_preconditioner(const SparseMatrix& A) {
  Vector invdiag(A.rows());
  for (int i = 0; i < A.rows(); ++i) {
    const double d = A.coeff(i, i);
    if (!(d > 0.0))
      throw std::invalid_argument("jacobi_preconditioner: nonpositive diagonal");
    invdiag[i] = 1.0 / d;
  }
  return [invdiag](const Vector& r) -> Vector {
    return invdiag.cwiseProduct(r);
  };
}

SolveReport pcg_solve(const SparseMatrix& A, const Vector& b, Vector& x,
                      const PcgOptions& opts, const Preconditioner& precond) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("pcg_solve: matrix must be square");
  if (b.size() != A.rows() || x.size() != A.rows())
    throw std::invalid_argument("pcg_solve: dimension mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("pcg_solve: tol must be > 0");

  SolveReport report;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    report.converged = true;
    return report;
  }

  Vector r = b - A * x;
  double rnorm = r.norm();
  if (rnorm / bnorm <= opts.tol) {
    report.rel_residual = rnorm / bnorm;
    report.converged = true;
    return report;
  }

  Vector z = precond ? precond(r) : r;
  Vector p = z;
  double rz = r.dot(z);
  Vector q(b.size());

  for (int it = 1; it <= opts.maxit; ++it) {
    q.noalias() = A * p;
    const double pq = p.dot(q);
    if (!(pq > 0.0)) break;  // loss of positive definiteness
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    rnorm = r.norm();
    report.iterations = it;
    if (rnorm / bnorm <= opts.tol) {
      report.converged = true;
      break;
    }
    z = precond ? precond(r) : r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  report.rel_residual = rnorm / bnorm;
  return report;
}

}  // namespace gradflow::linsolve
