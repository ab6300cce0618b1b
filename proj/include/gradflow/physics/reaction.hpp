#pragma once

#include <Eigen/Dense>

#include "gradflow/physics/mobility.hpp"

namespace gradflow::physics {

/// M species reacting through R reversible mass-action laws
///   sum_i alpha_i^p X_i  <->  sum_i beta_i^p X_i
/// with rates k+^p, k-^p > 0, per-species diffusion gamma_i >= 0 (with
/// optional power exponent for porous-medium diffusion) and the
/// detailed-balance entropy constants kappa_i.
///
/// Reactions whose rates are both zero are dropped at construction
/// (they contribute nothing); any remaining reaction must have strictly
/// positive rates, and kappa must be consistent with the rates:
///   sum_i (alpha_i^p - beta_i^p) log kappa_i = log(k+^p / k-^p).
class ReactionNetwork {
 public:
  ReactionNetwork(Eigen::MatrixXi alpha, Eigen::MatrixXi beta,
                  Eigen::VectorXd k_plus, Eigen::VectorXd k_minus,
                  Eigen::VectorXd kappa, Eigen::VectorXd gamma,
                  Eigen::VectorXd diff_expo = {});

  int species() const { return M_; }
  int reactions() const { return R_; }

  int alpha(int p, int i) const { return alpha_(p, i); }
  int beta(int p, int i) const { return beta_(p, i); }
  int stoich_diff(int p, int i) const { return alpha_(p, i) - beta_(p, i); }
  double k_plus(int p) const { return k_plus_[p]; }
  double k_minus(int p) const { return k_minus_[p]; }
  double kappa(int i) const { return kappa_[i]; }
  double gamma(int i) const { return gamma_[i]; }
  bool diffusing(int i) const { return gamma_[i] > 0.0; }

  PowerMobility v1(int i) const { return {gamma_[i], diff_expo_[i]}; }

  /// V_{2,p}(rho) = l(k+^p rho^alpha^p, k-^p rho^beta^p).
  double mobility(int p, const Eigen::VectorXd& rho) const;

  /// V_{2,p} restricted to species i with the other densities frozen,
  /// expressed in the solver's single-variable mass-action family.
  V2Family mobility_in_species(int p, int i,
                               const Eigen::VectorXd& rho_frozen) const;

  /// Whether species i enters reaction p (nonzero exponent on either side).
  bool participates(int p, int i) const {
    return alpha_(p, i) != 0 || beta_(p, i) != 0;
  }

 private:
  int M_, R_;
  Eigen::MatrixXi alpha_, beta_;  // R x M
  Eigen::VectorXd k_plus_, k_minus_, kappa_, gamma_, diff_expo_;
};

/// Spec-level convenience wrapper around ReactionNetwork::mobility.
double reaction_mobility(const ReactionNetwork& net, int p,
                         const Eigen::VectorXd& rho);

}  // namespace gradflow::physics
