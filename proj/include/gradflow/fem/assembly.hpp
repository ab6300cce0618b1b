#pragma once

#include <Eigen/Sparse>

#include "gradflow/fem/discretization.hpp"

namespace gradflow::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Mass matrix M_ij = (phi_i, phi_j)_h over the continuous space.
SparseMatrix assemble_mass(const Discretization& disc);

/// Stiffness matrix K_ij = (grad phi_i, grad phi_j)_h.
SparseMatrix assemble_stiffness(const Discretization& disc);

/// Constant-coefficient operator c*M + K (K omitted when with_stiffness
/// is false). This is the form of every Step-A system.
SparseMatrix assemble_operator(const Discretization& disc, double mass_coeff,
                               bool with_stiffness);

}  // namespace gradflow::fem
