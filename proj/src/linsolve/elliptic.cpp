#include "gradflow/linsolve/elliptic.hpp"

#include <stdexcept>

namespace gradflow::linsolve {

EllipticSolver::EllipticSolver(const fem::Discretization& disc,
                               double mass_coeff, bool with_stiffness,
                               const LinearSolverConfig& cfg)
    : cfg_(cfg) {
  switch (cfg_.method) {
    case LinearSolverConfig::Method::Pcg:
      A_ = fem::assemble_operator(disc, mass_coeff, with_stiffness);
      precond_ = jacobi_preconditioner(A_);
      break;
    case LinearSolverConfig::Method::PcgMg:
      gmg_ = std::make_unique<GmgHierarchy>(disc.mesh(), disc.degree(),
                                            disc.bc(), mass_coeff,
                                            with_stiffness, cfg_.gmg);
      A_ = gmg_->matrix();
      precond_ = gmg_->preconditioner();
      break;
    case LinearSolverConfig::Method::Direct:
      A_ = fem::assemble_operator(disc, mass_coeff, with_stiffness);
      chol_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(A_);
      if (chol_->info() != Eigen::Success)
        throw std::runtime_error("EllipticSolver: Cholesky factorization failed");
      break;
  }
}

SolveReport EllipticSolver::solve(const Vector& b, Vector& x) const {
  if (chol_) {
    x = chol_->solve(b);
    SolveReport rep;
    rep.converged = true;
    rep.iterations = 1;
    const double bn = b.norm();
    rep.rel_residual = bn > 0.0 ? (b - A_ * x).norm() / bn : 0.0;
    return rep;
  }
  PcgOptions opts{cfg_.tol, cfg_.maxit};
  return pcg_solve(A_, b, x, opts, precond_);
}

}  // namespace gradflow::linsolve
