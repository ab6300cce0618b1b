#include "gradflow/linsolve/multigrid.hpp"

#include <cmath>
#include <stdexcept>

#include "gradflow/fem/quadrature.hpp"

namespace gradflow::linsolve {

namespace {

// Interpolation from the coarse Q^k space into the fine one: each fine
// DOF takes the value of the coarse function at its nodal point.
SparseMatrix build_prolongation(const fem::Discretization& fine,
                                const fem::Discretization& coarse) {
  const int kp1 = fine.degree() + 1;
  const auto& cmesh = coarse.mesh();
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<char> done(fine.num_dofs(), 0);
  Eigen::VectorXd t(1);
  for (int g = 0; g < fine.num_dofs(); ++g) {
    const double x = fine.dof_x(g), y = fine.dof_y(g);
    int cx = static_cast<int>(std::floor((x - cmesh.xmin) / cmesh.hx()));
    int cy = static_cast<int>(std::floor((y - cmesh.ymin) / cmesh.hy()));
    cx = std::max(0, std::min(cx, cmesh.nx - 1));
    cy = std::max(0, std::min(cy, cmesh.ny - 1));
    t[0] = (x - cmesh.xmin) / cmesh.hx() - cx;
    const Eigen::MatrixXd lx =
        fem::lagrange_eval_matrix(coarse.dof_points_1d(), t);
    t[0] = (y - cmesh.ymin) / cmesh.hy() - cy;
    const Eigen::MatrixXd ly =
        fem::lagrange_eval_matrix(coarse.dof_points_1d(), t);
    const int cell = cy * cmesh.nx + cx;
    for (int jy = 0; jy < kp1; ++jy)
      for (int jx = 0; jx < kp1; ++jx) {
        const double v = lx(0, jx) * ly(0, jy);
        if (v != 0.0)
          trips.emplace_back(g, coarse.cell_dof(cell, jy * kp1 + jx), v);
      }
    done[g] = 1;
  }
  (void)done;
  SparseMatrix P(fine.num_dofs(), coarse.num_dofs());
  P.setFromTriplets(trips.begin(), trips.end(),
                    [](const double&, const double& b) { return b; });
  P.makeCompressed();
  return P;
}

}  // namespace

GmgHierarchy::GmgHierarchy(const fem::UniformMesh& fine_mesh, int degree,
                           fem::BoundaryCondition bc, double mass_coeff,
                           bool with_stiffness, const GmgOptions& opts)
    : opts_(opts) {
  std::vector<fem::UniformMesh> meshes{fine_mesh};
  while (true) {
    const auto& m = meshes.back();
    const bool can_halve = m.nx % 2 == 0 && m.ny % 2 == 0 && m.nx > 1 && m.ny > 1;
    if (opts_.levels > 0 && static_cast<int>(meshes.size()) == opts_.levels)
      break;
    if (!can_halve) {
      if (opts_.levels > 0)
        throw std::invalid_argument(
            "GmgHierarchy: requested levels need nx, ny divisible by 2^(levels-1)");
      break;
    }
    meshes.emplace_back(m.xmin, m.xmax, m.ymin, m.ymax, m.nx / 2, m.ny / 2);
  }

  std::vector<fem::Discretization> discs;
  discs.reserve(meshes.size());
  for (const auto& m : meshes) discs.emplace_back(m, degree, bc);

  for (std::size_t l = 0; l < discs.size(); ++l) {
    matrices_.push_back(
        fem::assemble_operator(discs[l], mass_coeff, with_stiffness));
    Vector d = matrices_.back().diagonal();
    inv_diag_.push_back(d.cwiseInverse());
    if (l + 1 < discs.size())
      prolong_.push_back(build_prolongation(discs[l], discs[l + 1]));
  }
  coarse_solver_.compute(Eigen::MatrixXd(matrices_.back()));
}

void GmgHierarchy::cycle(int level, const Vector& b, Vector& x) const {
  if (level == levels() - 1) {
    x = coarse_solver_.solve(b);
    return;
  }
  const SparseMatrix& A = matrices_[level];
  const Vector& dinv = inv_diag_[level];
  for (int s = 0; s < opts_.pre_smooth; ++s)
    x += opts_.jacobi_weight * dinv.cwiseProduct(b - A * x);
  const Vector r = b - A * x;
  const Vector rc = prolong_[level].transpose() * r;
  Vector ec = Vector::Zero(rc.size());
  cycle(level + 1, rc, ec);
  x += prolong_[level] * ec;
  for (int s = 0; s < opts_.post_smooth; ++s)
    x += opts_.jacobi_weight * dinv.cwiseProduct(b - A * x);
}

Vector GmgHierarchy::vcycle(const Vector& b, const Vector& x0) const {
  if (b.size() != matrix().rows() || x0.size() != matrix().rows())
    throw std::invalid_argument("GmgHierarchy::vcycle: dimension mismatch");
  Vector x = x0;
  cycle(0, b, x);
  return x;
}

Preconditioner GmgHierarchy::preconditioner() const {
  return [this](const Vector& r) -> Vector {
    return vcycle(r, Vector::Zero(r.size()));
  };
}

}  // namespace gradflow::linsolve
