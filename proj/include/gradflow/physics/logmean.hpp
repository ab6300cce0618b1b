#pragma once

namespace gradflow::physics {

/// Logarithmic mean l(x,y) = (x-y)/(log x - log y), extended by
/// l(x,x) = x. Defined for x, y >= 0 with l = 0 as soon as one argument
/// vanishes. Throws on negative input.
double log_mean(double x, double y);

struct LogMeanDerivs {
  double value;
  double dx;
  double dy;
};

/// Value and partial derivatives of the logarithmic mean. Partials at
/// x = y equal 1/2; at the boundary (either argument zero) they are
/// returned as 0 (callers clip densities away from zero before
/// differentiating).
LogMeanDerivs log_mean_derivs(double x, double y);

}  // namespace gradflow::physics
