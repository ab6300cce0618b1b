#pragma once

#include <Eigen/Dense>
#include <functional>

#include "gradflow/fem/quadrature.hpp"

namespace gradflow::fem {

enum class BoundaryCondition { Neumann, Periodic };

/// Axis-aligned uniform rectangular mesh of nx-by-ny cells.
struct UniformMesh {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  int nx = 1, ny = 1;

  UniformMesh() = default;  // unit-square placeholder
  UniformMesh(double xmin_, double xmax_, double ymin_, double ymax_, int nx_,
              int ny_);

  double hx() const { return (xmax - xmin) / nx; }
  double hy() const { return (ymax - ymin) / ny; }
  double area() const { return (xmax - xmin) * (ymax - ymin); }
  int cells() const { return nx * ny; }
};

/// Values of a discontinuous Q^k function at the global Gauss-Legendre
/// quadrature nodes (the nodal-basis coefficient vector of W_h^k).
using QuadField = Eigen::VectorXd;

/// Degree-of-freedom vector of an H1-conforming Q^k function.
using ContinuousField = Eigen::VectorXd;

/// Tensor-product Q^k spaces on a uniform rectangular mesh together with
/// the Gauss-Legendre nodal quadrature and the operators mapping
/// continuous fields to quadrature-node values of (Phi, dx Phi, dy Phi).
///
/// Node ordering is lexicographic: cell-row-major over cells, then
/// y-major over the (k+1)^2 tensor nodes within each cell, x fastest.
/// All cells share one reference block for evaluation and derivatives
/// (the mesh is uniform, so every cell Jacobian is the same).
class Discretization {
 public:
  Discretization(const UniformMesh& mesh, int degree, BoundaryCondition bc);

  const UniformMesh& mesh() const { return mesh_; }
  int degree() const { return k_; }
  BoundaryCondition bc() const { return bc_; }

  int num_nodes() const { return static_cast<int>(weights_.size()); }
  int num_dofs() const { return num_dofs_; }
  int nodes_per_cell() const { return (k_ + 1) * (k_ + 1); }

  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& node_x() const { return node_x_; }
  const Eigen::VectorXd& node_y() const { return node_y_; }
  const QuadRule1D& rule_1d() const { return gl_; }
  const Eigen::VectorXd& dof_points_1d() const { return dof_pts_; }

  int node_index(int cell, int local) const {
    return cell * nodes_per_cell() + local;
  }
  int cell_dof(int cell, int local) const {
    return cell_dofs_[static_cast<std::size_t>(cell) * nodes_per_cell() +
                      local];
  }
  double dof_x(int g) const { return dof_x_[g]; }
  double dof_y(int g) const { return dof_y_[g]; }

  // Reference blocks: row = local quadrature node, col = local dof.
  // Derivative blocks carry the physical 1/hx, 1/hy scaling.
  const Eigen::MatrixXd& block_value() const { return e0_; }
  const Eigen::MatrixXd& block_dx() const { return dx_; }
  const Eigen::MatrixXd& block_dy() const { return dy_; }

  // Differential operator, applied matrix-free cell by cell.
  QuadField value_at_nodes(const ContinuousField& phi) const;
  QuadField dx_at_nodes(const ContinuousField& phi) const;
  QuadField dy_at_nodes(const ContinuousField& phi) const;

  // Transposed application: given per-node coefficients c, returns the
  // DOF vector of the functional sum_i c_i psi(xi_i) (caller supplies
  // any quadrature weighting inside c).
  ContinuousField value_t(const QuadField& c) const;
  ContinuousField dx_t(const QuadField& c) const;
  ContinuousField dy_t(const QuadField& c) const;

  /// Discrete L2 inner product (u,v)_h = sum_i u_i v_i w_i.
  double inner(const QuadField& u, const QuadField& v) const;
  /// Discrete integral (u,1)_h.
  double integral(const QuadField& u) const;

  /// Samples an analytic function at the quadrature nodes.
  QuadField interpolate(const std::function<double(double, double)>& f) const;
  /// Samples an analytic function at the continuous-space DOF points.
  ContinuousField interpolate_dofs(
      const std::function<double(double, double)>& f) const;

  /// sqrt((u-f, u-f)_h) against an analytic function.
  double l2_error(const QuadField& u,
                  const std::function<double(double, double)>& f) const;

  /// True L2 error of the per-cell polynomial against f, integrated with
  /// an elevated rule (n points per direction and cell). The nodal error
  /// above superconverges at the quadrature points; convergence studies
  /// need the function-space error.
  double l2_error_elevated(const QuadField& u,
                           const std::function<double(double, double)>& f,
                           int points_per_cell) const;

  /// Evaluates the per-cell polynomial of a QuadField at an arbitrary
  /// point. Points on cell boundaries resolve to the lower-index cell at
  /// the domain interior and clamp at the domain boundary.
  double eval(const QuadField& u, double x, double y) const;

  /// Values of a QuadField's per-cell polynomial at the nodes of a finer
  /// per-cell tensor rule (used by the singular-kernel source rule).
  Eigen::VectorXd values_at_rule(const QuadField& u,
                                 const QuadRule1D& rule) const;

 private:
  QuadField apply_block(const ContinuousField& phi,
                        const Eigen::MatrixXd& block) const;
  ContinuousField apply_block_t(const QuadField& c,
                                const Eigen::MatrixXd& block) const;

  UniformMesh mesh_;
  int k_;
  BoundaryCondition bc_;
  int num_dofs_ = 0;

  QuadRule1D gl_;            // (k+1)-point rule on [0,1]
  Eigen::VectorXd dof_pts_;  // Gauss-Lobatto nodal points on [0,1]
  Eigen::MatrixXd e0_, dx_, dy_;
  Eigen::VectorXd weights_, node_x_, node_y_;
  std::vector<int> cell_dofs_;
  Eigen::VectorXd dof_x_, dof_y_;
};

}  // namespace gradflow::fem
