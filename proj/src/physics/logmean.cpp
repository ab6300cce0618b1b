#include "gradflow/physics/logmean.hpp"

#include <cmath>
#include <stdexcept>

namespace gradflow::physics {

namespace {

// Series for (L - d)/L^2 with L = -log1p(-d), d = (x-y)/x, valid for
// small |d|. This is the partial derivative of the log mean in its
// first argument.
double dldx_series(double d) {
  const double num = 0.5 + d * (1.0 / 3.0 + d * (0.25 + d * 0.2));
  const double den = 1.0 + d * (0.5 + d * (1.0 / 3.0 + d * 0.25));
  return num / (den * den);
}

}  // namespace

double log_mean(double x, double y) {
  if (x < 0.0 || y < 0.0)
    throw std::invalid_argument("log_mean: arguments must be nonnegative");
  if (x == y) return y;
  if (x == 0.0 || y == 0.0) return 0.0;
  const double d = (x - y) / x;
  if (std::abs(d) < 1e-4) {
    // l = x*d/L with the same series denominator as above.
    return x / (1.0 + d * (0.5 + d * (1.0 / 3.0 + d * 0.25)));
  }
  return (x - y) / (std::log(x) - std::log(y));
}

LogMeanDerivs log_mean_derivs(double x, double y) {
  if (x < 0.0 || y < 0.0)
    throw std::invalid_argument("log_mean_derivs: arguments must be nonnegative");
  if (x == 0.0 || y == 0.0) return {0.0, 0.0, 0.0};
  if (x == y) return {x, 0.5, 0.5};
  const double d = (x - y) / x;  // relative gap seen from x
  const double e = (y - x) / y;
  LogMeanDerivs out{};
  out.value = log_mean(x, y);
  if (std::abs(d) < 1e-4) {
    out.dx = dldx_series(d);
    out.dy = dldx_series(e);
    return out;
  }
  const double L = std::log(x) - std::log(y);
  out.dx = (L - (x - y) / x) / (L * L);
  out.dy = (-L + (x - y) / y) / (L * L);
  return out;
}

}  // namespace gradflow::physics
