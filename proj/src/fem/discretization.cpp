#include "gradflow/fem/discretization.hpp"

#include <cmath>
#include <stdexcept>

namespace gradflow::fem {

UniformMesh::UniformMesh(double xmin_, double xmax_, double ymin_,
                         double ymax_, int nx_, int ny_)
    : xmin(xmin_), xmax(xmax_), ymin(ymin_), ymax(ymax_), nx(nx_), ny(ny_) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("UniformMesh: need nx, ny >= 1");
  if (!(xmax > xmin) || !(ymax > ymin))
    throw std::invalid_argument("UniformMesh: empty domain");
}

Discretization::Discretization(const UniformMesh& mesh, int degree,
                               BoundaryCondition bc)
    : mesh_(mesh), k_(degree), bc_(bc) {
  if (k_ < 1) throw std::invalid_argument("Discretization: degree must be >= 1");

  gl_ = gauss_legendre_1d(k_ + 1);
  dof_pts_ = gauss_lobatto_points(k_);

  const int kp1 = k_ + 1;
  const int npc = kp1 * kp1;
  const double hx = mesh_.hx(), hy = mesh_.hy();

  // Reference blocks. l_i'(x) is again a polynomial of degree <= k, so the
  // derivative evaluation matrix is (value matrix) * (nodal diff matrix).
  const Eigen::MatrixXd lval = lagrange_eval_matrix(dof_pts_, gl_.nodes);
  const Eigen::MatrixXd lder = lval * lagrange_diff_matrix(dof_pts_);
  e0_.resize(npc, npc);
  dx_.resize(npc, npc);
  dy_.resize(npc, npc);
  for (int ay = 0; ay < kp1; ++ay)
    for (int ax = 0; ax < kp1; ++ax)
      for (int jy = 0; jy < kp1; ++jy)
        for (int jx = 0; jx < kp1; ++jx) {
          const int row = ay * kp1 + ax;
          const int col = jy * kp1 + jx;
          e0_(row, col) = lval(ax, jx) * lval(ay, jy);
          dx_(row, col) = lder(ax, jx) * lval(ay, jy) / hx;
          dy_(row, col) = lval(ax, jx) * lder(ay, jy) / hy;
        }

  // Global node coordinates and weights, cell-major.
  const int nn = mesh_.cells() * npc;
  weights_.resize(nn);
  node_x_.resize(nn);
  node_y_.resize(nn);
  for (int cy = 0; cy < mesh_.ny; ++cy)
    for (int cx = 0; cx < mesh_.nx; ++cx) {
      const int cell = cy * mesh_.nx + cx;
      for (int ly = 0; ly < kp1; ++ly)
        for (int lx = 0; lx < kp1; ++lx) {
          const int q = node_index(cell, ly * kp1 + lx);
          node_x_[q] = mesh_.xmin + (cx + gl_.nodes[lx]) * hx;
          node_y_[q] = mesh_.ymin + (cy + gl_.nodes[ly]) * hy;
          weights_[q] = gl_.weights[lx] * gl_.weights[ly] * hx * hy;
        }
    }

  // DOF numbering, lexicographic in the global nodal lattice. Periodic
  // meshes identify the wrap-around layer.
  const int ndx = (bc_ == BoundaryCondition::Periodic) ? k_ * mesh_.nx
                                                       : k_ * mesh_.nx + 1;
  const int ndy = (bc_ == BoundaryCondition::Periodic) ? k_ * mesh_.ny
                                                       : k_ * mesh_.ny + 1;
  num_dofs_ = ndx * ndy;
  cell_dofs_.resize(static_cast<std::size_t>(mesh_.cells()) * npc);
  dof_x_.resize(num_dofs_);
  dof_y_.resize(num_dofs_);
  for (int cy = 0; cy < mesh_.ny; ++cy)
    for (int cx = 0; cx < mesh_.nx; ++cx) {
      const int cell = cy * mesh_.nx + cx;
      for (int jy = 0; jy < kp1; ++jy)
        for (int jx = 0; jx < kp1; ++jx) {
          int gx = cx * k_ + jx;
          int gy = cy * k_ + jy;
          if (bc_ == BoundaryCondition::Periodic) {
            gx %= ndx;
            gy %= ndy;
          }
          const int g = gy * ndx + gx;
          cell_dofs_[static_cast<std::size_t>(cell) * npc + jy * kp1 + jx] = g;
          dof_x_[g] = mesh_.xmin + (cx + dof_pts_[jx]) * hx;
          dof_y_[g] = mesh_.ymin + (cy + dof_pts_[jy]) * hy;
        }
    }
  if (bc_ == BoundaryCondition::Periodic) {
    // Canonical coordinates for seam DOFs: first occurrence.
    for (int g = 0; g < num_dofs_; ++g) {
      const int gx = g % ndx, gy = g / ndx;
      dof_x_[g] = mesh_.xmin + (gx / k_ + dof_pts_[gx % k_]) * hx;
      dof_y_[g] = mesh_.ymin + (gy / k_ + dof_pts_[gy % k_]) * hy;
    }
  }
}

QuadField Discretization::apply_block(const ContinuousField& phi,
                                      const Eigen::MatrixXd& block) const {
  if (phi.size() != num_dofs_)
    throw std::invalid_argument("Discretization: DOF vector size mismatch");
  const int npc = nodes_per_cell();
  QuadField out(num_nodes());
#pragma omp parallel
  {
    Eigen::VectorXd local(npc);
#pragma omp for schedule(static)
    for (int cell = 0; cell < mesh_.cells(); ++cell) {
      for (int l = 0; l < npc; ++l) local[l] = phi[cell_dof(cell, l)];
      out.segment(cell * npc, npc).noalias() = block * local;
    }
  }
  return out;
}

ContinuousField Discretization::apply_block_t(const QuadField& c,
                                              const Eigen::MatrixXd& block) const {
  if (c.size() != num_nodes())
    throw std::invalid_argument("Discretization: node vector size mismatch");
  const int npc = nodes_per_cell();
  ContinuousField out = ContinuousField::Zero(num_dofs_);
  Eigen::VectorXd local(npc);
  for (int cell = 0; cell < mesh_.cells(); ++cell) {
    local.noalias() = block.transpose() * c.segment(cell * npc, npc);
    for (int l = 0; l < npc; ++l) out[cell_dof(cell, l)] += local[l];
  }
  return out;
}

QuadField Discretization::value_at_nodes(const ContinuousField& phi) const {
  return apply_block(phi, e0_);
}
QuadField Discretization::dx_at_nodes(const ContinuousField& phi) const {
  return apply_block(phi, dx_);
}
QuadField Discretization::dy_at_nodes(const ContinuousField& phi) const {
  return apply_block(phi, dy_);
}
ContinuousField Discretization::value_t(const QuadField& c) const {
  return apply_block_t(c, e0_);
}
ContinuousField Discretization::dx_t(const QuadField& c) const {
  return apply_block_t(c, dx_);
}
ContinuousField Discretization::dy_t(const QuadField& c) const {
  return apply_block_t(c, dy_);
}

double Discretization::inner(const QuadField& u, const QuadField& v) const {
  if (u.size() != num_nodes() || v.size() != num_nodes())
    throw std::invalid_argument("inner: field size does not match the rule");
  return (u.array() * v.array() * weights_.array()).sum();
}

double Discretization::integral(const QuadField& u) const {
  if (u.size() != num_nodes())
    throw std::invalid_argument("integral: field size does not match the rule");
  return (u.array() * weights_.array()).sum();
}

QuadField Discretization::interpolate(
    const std::function<double(double, double)>& f) const {
  QuadField out(num_nodes());
  for (int q = 0; q < num_nodes(); ++q) out[q] = f(node_x_[q], node_y_[q]);
  return out;
}

ContinuousField Discretization::interpolate_dofs(
    const std::function<double(double, double)>& f) const {
  ContinuousField out(num_dofs_);
  for (int g = 0; g < num_dofs_; ++g) out[g] = f(dof_x_[g], dof_y_[g]);
  return out;
}

double Discretization::l2_error(
    const QuadField& u,
    const std::function<double(double, double)>& f) const {
  double acc = 0.0;
  for (int q = 0; q < num_nodes(); ++q) {
    const double d = u[q] - f(node_x_[q], node_y_[q]);
    acc += d * d * weights_[q];
  }
  return std::sqrt(acc);
}

double Discretization::l2_error_elevated(
    const QuadField& u, const std::function<double(double, double)>& f,
    int points_per_cell) const {
  const QuadRule1D rule = gauss_legendre_1d(points_per_cell);
  const Eigen::VectorXd vals = values_at_rule(u, rule);
  const int m = points_per_cell;
  const double hx = mesh_.hx(), hy = mesh_.hy();
  double acc = 0.0;
  for (int cy = 0; cy < mesh_.ny; ++cy)
    for (int cx = 0; cx < mesh_.nx; ++cx) {
      const int cell = cy * mesh_.nx + cx;
      for (int by = 0; by < m; ++by)
        for (int bx = 0; bx < m; ++bx) {
          const double x = mesh_.xmin + (cx + rule.nodes[bx]) * hx;
          const double y = mesh_.ymin + (cy + rule.nodes[by]) * hy;
          const double d = vals[cell * m * m + by * m + bx] - f(x, y);
          acc += d * d * rule.weights[bx] * rule.weights[by] * hx * hy;
        }
    }
  return std::sqrt(acc);
}

double Discretization::eval(const QuadField& u, double x, double y) const {
  const int kp1 = k_ + 1;
  int cx = static_cast<int>(std::floor((x - mesh_.xmin) / mesh_.hx()));
  int cy = static_cast<int>(std::floor((y - mesh_.ymin) / mesh_.hy()));
  cx = std::max(0, std::min(cx, mesh_.nx - 1));
  cy = std::max(0, std::min(cy, mesh_.ny - 1));
  const double sx = (x - mesh_.xmin) / mesh_.hx() - cx;
  const double sy = (y - mesh_.ymin) / mesh_.hy() - cy;
  Eigen::VectorXd tx(1), ty(1);
  tx[0] = sx;
  ty[0] = sy;
  const Eigen::MatrixXd lx = lagrange_eval_matrix(gl_.nodes, tx);
  const Eigen::MatrixXd ly = lagrange_eval_matrix(gl_.nodes, ty);
  const int cell = cy * mesh_.nx + cx;
  double val = 0.0;
  for (int by = 0; by < kp1; ++by)
    for (int bx = 0; bx < kp1; ++bx)
      val += lx(0, bx) * ly(0, by) * u[node_index(cell, by * kp1 + bx)];
  return val;
}

Eigen::VectorXd Discretization::values_at_rule(const QuadField& u,
                                               const QuadRule1D& rule) const {
  const int kp1 = k_ + 1;
  const int m = static_cast<int>(rule.nodes.size());
  const Eigen::MatrixXd L = lagrange_eval_matrix(gl_.nodes, rule.nodes);
  Eigen::VectorXd out(mesh_.cells() * m * m);
  Eigen::MatrixXd cellvals(kp1, kp1);
  for (int cell = 0; cell < mesh_.cells(); ++cell) {
    for (int ly = 0; ly < kp1; ++ly)
      for (int lx = 0; lx < kp1; ++lx)
        cellvals(lx, ly) = u[node_index(cell, ly * kp1 + lx)];
    const Eigen::MatrixXd fine = L * cellvals * L.transpose();  // m x m
    for (int by = 0; by < m; ++by)
      for (int bx = 0; bx < m; ++bx)
        out[cell * m * m + by * m + bx] = fine(bx, by);
  }
  return out;
}

}  // namespace gradflow::fem
