#include "gradflow/fem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace gradflow::fem {

namespace {

// Value and derivative of the Legendre polynomial P_n on [-1,1].
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadRule1D gauss_legendre_1d(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_1d: n must be >= 1");
  QuadRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Roots of P_n on [-1,1] by Newton, Chebyshev initial guesses.
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
    if (2 * i + 1 == n) x = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      if (x == 0.0 && p == 0.0) break;
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        auto [p2, dp2] = legendre(n, x);
        x -= p2 / dp2;
        break;
      }
    }
    auto [p, dp] = legendre(n, x);
    (void)p;
    rule.nodes[i] = 0.5 * (x + 1.0);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // = (2/((1-x^2)dp^2))/2
  }
  return rule;
}

Eigen::VectorXd gauss_lobatto_points(int p) {
  if (p < 1) throw std::invalid_argument("gauss_lobatto_points: p must be >= 1");
  Eigen::VectorXd pts(p + 1);
  pts[0] = 0.0;
  pts[p] = 1.0;
  // Interior points are roots of P_p' on (-1,1). Newton on dP with
  // Chebyshev-Lobatto initial guesses.
  for (int i = 1; i < p; ++i) {
    double x = -std::cos(M_PI * i / p);
    for (int it = 0; it < 100; ++it) {
      auto [pv, dp] = legendre(p, x);
      // d2P from the Legendre ODE: (1-x^2) P'' = 2x P' - p(p+1) P
      const double d2p = (2.0 * x * dp - p * (p + 1) * pv) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    pts[i] = 0.5 * (x + 1.0);
  }
  if (p % 2 == 0) pts[p / 2] = 0.5;
  return pts;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) w[i] /= (nodes[i] - nodes[j]);
  return w;
}

Eigen::MatrixXd lagrange_eval_matrix(const Eigen::VectorXd& nodes,
                                     const Eigen::VectorXd& targets) {
  const int n = static_cast<int>(nodes.size());
  const int t = static_cast<int>(targets.size());
  const Eigen::VectorXd w = barycentric_weights(nodes);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(t, n);
  for (int a = 0; a < t; ++a) {
    const double x = targets[a];
    int hit = -1;
    for (int i = 0; i < n; ++i)
      if (x == nodes[i]) hit = i;
    if (hit >= 0) {
      L(a, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int i = 0; i < n; ++i) denom += w[i] / (x - nodes[i]);
    for (int i = 0; i < n; ++i) L(a, i) = (w[i] / (x - nodes[i])) / denom;
  }
  return L;
}

Eigen::MatrixXd lagrange_diff_matrix(const Eigen::VectorXd& nodes) {
  const int n = static_cast<int>(nodes.size());
  const Eigen::VectorXd w = barycentric_weights(nodes);
  Eigen::MatrixXd D(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      D(j, i) = (w[i] / w[j]) / (nodes[j] - nodes[i]);
      diag -= D(j, i);
    }
    D(j, j) = diag;
  }
  return D;
}

}  // namespace gradflow::fem
