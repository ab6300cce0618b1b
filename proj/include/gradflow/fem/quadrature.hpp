#pragma once

#include <Eigen/Dense>

namespace gradflow::fem {

/// One-dimensional quadrature rule on the reference interval [0,1].
struct QuadRule1D {
  Eigen::VectorXd nodes;    // strictly inside (0,1), ascending
  Eigen::VectorXd weights;  // positive, sum to 1
};

/// n-point Gauss-Legendre rule on [0,1], exact for polynomials of
/// degree <= 2n-1. Nodes are computed by Newton iteration on the
/// Legendre polynomial to ~1e-15.
QuadRule1D gauss_legendre_1d(int n);

/// Gauss-Lobatto-Legendre points on [0,1] (p+1 points including both
/// endpoints, p >= 1). Used as the nodal points of the continuous space.
Eigen::VectorXd gauss_lobatto_points(int p);

/// Barycentric weights for the Lagrange basis on the given nodes.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// Evaluation matrix L with L(t,i) = l_i(targets[t]) for the Lagrange
/// basis {l_i} on `nodes`. Exact (returns unit rows) when a target
/// coincides with a node.
Eigen::MatrixXd lagrange_eval_matrix(const Eigen::VectorXd& nodes,
                                     const Eigen::VectorXd& targets);

/// Spectral differentiation matrix D with D(j,i) = l_i'(nodes[j]).
Eigen::MatrixXd lagrange_diff_matrix(const Eigen::VectorXd& nodes);

}  // namespace gradflow::fem
