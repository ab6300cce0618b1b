#pragma once

#include <functional>

#include "gradflow/fem/discretization.hpp"

namespace gradflow::physics {

struct TermEval {
  double value;
  double deriv;
};

/// alpha * U_m(rho) and its derivative, with U_1 = rho log rho and
/// U_m = rho^m/(m-1) for m > 1. At rho = 0 the value is the limit 0;
/// for m = 1 the derivative is unbounded below and is reported as
/// -infinity (callers clip rho away from zero first).
TermEval diffusion_term(double rho, double m, double alpha);

/// alpha * rho (log(kappa rho) - 1) and its derivative alpha*log(kappa rho),
/// the detailed-balance entropy. Same boundary convention as above.
TermEval entropy_term(double rho, double kappa, double alpha = 1.0);

/// Declarative description of the scalar energy
///   E(rho) = int alpha U_m(rho) + rho V + 1/2 (W*rho) rho.
/// With entropy_form set, alpha U_m is replaced by the detailed-balance
/// entropy alpha * rho (log(kappa rho) - 1).
struct EnergySpec {
  double alpha = 0.0;
  double m = 1.0;
  bool entropy_form = false;
  double kappa = 1.0;
  std::function<double(double, double)> drift;   // V(x), optional
  std::function<double(double, double)> kernel;  // W(x), optional, symmetric
  bool kernel_singular = false;

  bool has_interaction() const { return static_cast<bool>(kernel); }

  TermEval diffusion(double rho) const {
    return entropy_form ? entropy_term(rho, kappa, alpha)
                        : diffusion_term(rho, m, alpha);
  }
};

/// Discrete total energy (alpha U_m(rho) + rho V, 1)_h + 1/2 (Wrho, rho)_h.
/// When the interaction term is active the frozen convolution W*rho must
/// be supplied.
double energy_eval(const fem::Discretization& disc, const EnergySpec& spec,
                   const fem::QuadField& rho,
                   const fem::QuadField* w_rho = nullptr);

}  // namespace gradflow::physics
