#include "gradflow/physics/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gradflow::physics {

TermEval diffusion_term(double rho, double m, double alpha) {
  if (rho < 0.0)
    throw std::invalid_argument("diffusion_term: rho must be nonnegative");
  if (alpha == 0.0) return {0.0, 0.0};
  if (m == 1.0) {
    if (rho == 0.0)
      return {0.0, -std::numeric_limits<double>::infinity()};
    const double lg = std::log(rho);
    return {alpha * rho * lg, alpha * (lg + 1.0)};
  }
  const double pm1 = std::pow(rho, m - 1.0);
  return {alpha * rho * pm1 / (m - 1.0), alpha * m * pm1 / (m - 1.0)};
}

TermEval entropy_term(double rho, double kappa, double alpha) {
  if (rho < 0.0)
    throw std::invalid_argument("entropy_term: rho must be nonnegative");
  if (alpha == 0.0) return {0.0, 0.0};
  if (rho == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
  const double lg = std::log(kappa * rho);
  return {alpha * rho * (lg - 1.0), alpha * lg};
}

double energy_eval(const fem::Discretization& disc, const EnergySpec& spec,
                   const fem::QuadField& rho, const fem::QuadField* w_rho) {
  if (rho.size() != disc.num_nodes())
    throw std::invalid_argument("energy_eval: field size mismatch");
  if (spec.has_interaction() && w_rho == nullptr)
    throw std::invalid_argument(
        "energy_eval: interaction term requires the frozen convolution");
  const auto& w = disc.weights();
  double acc = 0.0;
  for (int q = 0; q < disc.num_nodes(); ++q) {
    double e = spec.diffusion(rho[q]).value;
    if (spec.drift) e += rho[q] * spec.drift(disc.node_x()[q], disc.node_y()[q]);
    if (w_rho) e += 0.5 * (*w_rho)[q] * rho[q];
    acc += e * w[q];
  }
  return acc;
}

}  // namespace gradflow::physics
