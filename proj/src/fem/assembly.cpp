#include "gradflow/fem/assembly.hpp"

#include <vector>

namespace gradflow::fem {

namespace {

SparseMatrix assemble_from_element(const Discretization& disc,
                                   const Eigen::MatrixXd& elem) {
  const int npc = disc.nodes_per_cell();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(disc.mesh().cells()) * npc * npc);
  for (int cell = 0; cell < disc.mesh().cells(); ++cell)
    for (int a = 0; a < npc; ++a)
      for (int b = 0; b < npc; ++b)
        trips.emplace_back(disc.cell_dof(cell, a), disc.cell_dof(cell, b),
                           elem(a, b));
  SparseMatrix A(disc.num_dofs(), disc.num_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

Eigen::MatrixXd element_mass(const Discretization& disc) {
  const int npc = disc.nodes_per_cell();
  // Cell weights are identical for every cell of the uniform mesh.
  Eigen::VectorXd w = disc.weights().segment(0, npc);
  return disc.block_value().transpose() * w.asDiagonal() * disc.block_value();
}

Eigen::MatrixXd element_stiffness(const Discretization& disc) {
  const int npc = disc.nodes_per_cell();
  Eigen::VectorXd w = disc.weights().segment(0, npc);
  return disc.block_dx().transpose() * w.asDiagonal() * disc.block_dx() +
         disc.block_dy().transpose() * w.asDiagonal() * disc.block_dy();
}

}  // namespace

SparseMatrix assemble_mass(const Discretization& disc) {
  return assemble_from_element(disc, element_mass(disc));
}

SparseMatrix assemble_stiffness(const Discretization& disc) {
  return assemble_from_element(disc, element_stiffness(disc));
}

SparseMatrix assemble_operator(const Discretization& disc, double mass_coeff,
                               bool with_stiffness) {
  Eigen::MatrixXd elem = mass_coeff * element_mass(disc);
  if (with_stiffness) elem += element_stiffness(disc);
  return assemble_from_element(disc, elem);
}

}  // namespace gradflow::fem
