#include "gradflow/physics/reaction.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gradflow::physics {

ReactionNetwork::ReactionNetwork(Eigen::MatrixXi alpha, Eigen::MatrixXi beta,
                                 Eigen::VectorXd k_plus,
                                 Eigen::VectorXd k_minus,
                                 Eigen::VectorXd kappa, Eigen::VectorXd gamma,
                                 Eigen::VectorXd diff_expo) {
  M_ = static_cast<int>(gamma.size());
  const int r_in = static_cast<int>(k_plus.size());
  if (alpha.rows() != r_in || beta.rows() != r_in || alpha.cols() != M_ ||
      beta.cols() != M_ || k_minus.size() != r_in || kappa.size() != M_)
    throw std::invalid_argument("ReactionNetwork: inconsistent shapes");
  if ((alpha.array() < 0).any() || (beta.array() < 0).any())
    throw std::invalid_argument("ReactionNetwork: stoichiometry must be >= 0");
  if ((kappa.array() <= 0.0).any())
    throw std::invalid_argument("ReactionNetwork: kappa must be positive");
  if ((gamma.array() < 0.0).any())
    throw std::invalid_argument("ReactionNetwork: gamma must be nonnegative");

  if (diff_expo.size() == 0) diff_expo = Eigen::VectorXd::Ones(M_);
  if (diff_expo.size() != M_)
    throw std::invalid_argument("ReactionNetwork: diff_expo size mismatch");

  // Keep only live reactions; a pair of zero rates is the decoupled limit.
  std::vector<int> live;
  for (int p = 0; p < r_in; ++p) {
    if (k_plus[p] == 0.0 && k_minus[p] == 0.0) continue;
    if (k_plus[p] <= 0.0 || k_minus[p] <= 0.0)
      throw std::invalid_argument(
          "ReactionNetwork: reactions must be reversible (both rates > 0)");
    live.push_back(p);
  }
  R_ = static_cast<int>(live.size());
  alpha_.resize(R_, M_);
  beta_.resize(R_, M_);
  k_plus_.resize(R_);
  k_minus_.resize(R_);
  for (int q = 0; q < R_; ++q) {
    alpha_.row(q) = alpha.row(live[q]);
    beta_.row(q) = beta.row(live[q]);
    k_plus_[q] = k_plus[live[q]];
    k_minus_[q] = k_minus[live[q]];
  }
  kappa_ = std::move(kappa);
  gamma_ = std::move(gamma);
  diff_expo_ = std::move(diff_expo);

  // Detailed-balance consistency of the entropy constants.
  for (int p = 0; p < R_; ++p) {
    double lhs = 0.0;
    for (int i = 0; i < M_; ++i)
      lhs += stoich_diff(p, i) * std::log(kappa_[i]);
    const double rhs = std::log(k_plus_[p] / k_minus_[p]);
    if (std::abs(lhs - rhs) > 1e-9)
      throw std::invalid_argument(
          "ReactionNetwork: kappa inconsistent with reaction rates");
  }
}

double ReactionNetwork::mobility(int p, const Eigen::VectorXd& rho) const {
  double x = k_plus_[p], y = k_minus_[p];
  for (int i = 0; i < M_; ++i) {
    if (alpha_(p, i) != 0) x *= V2Family::pw(rho[i], alpha_(p, i));
    if (beta_(p, i) != 0) y *= V2Family::pw(rho[i], beta_(p, i));
  }
  return log_mean(x, y);
}

V2Family ReactionNetwork::mobility_in_species(
    int p, int i, const Eigen::VectorXd& rho_frozen) const {
  double cx = k_plus_[p], cy = k_minus_[p];
  for (int j = 0; j < M_; ++j) {
    if (j == i) continue;
    if (alpha_(p, j) != 0) cx *= V2Family::pw(rho_frozen[j], alpha_(p, j));
    if (beta_(p, j) != 0) cy *= V2Family::pw(rho_frozen[j], beta_(p, j));
  }
  return V2Family::mass_action(cx, alpha_(p, i), cy, beta_(p, i));
}

double reaction_mobility(const ReactionNetwork& net, int p,
                         const Eigen::VectorXd& rho) {
  if (p < 0 || p >= net.reactions())
    throw std::invalid_argument("reaction_mobility: reaction index out of range");
  if (rho.size() != net.species())
    throw std::invalid_argument("reaction_mobility: species count mismatch");
  return net.mobility(p, rho);
}

}  // namespace gradflow::physics
