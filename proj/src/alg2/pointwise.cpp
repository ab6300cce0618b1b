#include "gradflow/alg2/pointwise.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gradflow::alg2 {

double NodeEnergy::value(double rho) const {
  switch (kind) {
    case Kind::None:
      return lin * rho;
    case Kind::Power: {
      if (rho == 0.0) return lin * rho;
      if (m == 1.0) return alpha * rho * std::log(rho) + lin * rho;
      return alpha * std::pow(rho, m) / (m - 1.0) + lin * rho;
    }
    case Kind::Entropy: {
      if (rho == 0.0) return 0.0;
      return alpha * rho * (std::log(kappa * rho) - 1.0) + lin * rho;
    }
  }
  return 0.0;
}

double NodeEnergy::deriv(double rho, double rho_min) const {
  const double rc = std::max(rho, rho_min);
  switch (kind) {
    case Kind::None:
      return lin;
    case Kind::Power:
      if (m == 1.0) return alpha * (std::log(rc) + 1.0) + lin;
      return alpha * m * std::pow(rc, m - 1.0) / (m - 1.0) + lin;
    case Kind::Entropy:
      return alpha * std::log(kappa * rc) + lin;
  }
  return 0.0;
}

double node_objective(const NodeProblem& p, double rho) {
  const double r = p.r;
  double f = (rho - r * p.rho_bar) * (rho - r * p.rho_bar) / (2.0 * r);
  if (p.m0_bar != 0.0)
    f += r * r * p.m0_bar * p.m0_bar / (2.0 * (r + p.v1x.value(rho)));
  if (p.m1_bar != 0.0)
    f += r * r * p.m1_bar * p.m1_bar / (2.0 * (r + p.v1y.value(rho)));
  for (int q = 0; q < p.n_reactions; ++q) {
    const auto& rx = p.reactions[q];
    f += r * r * rx.s_bar * rx.s_bar / (2.0 * (r + rx.v2.value(rho)));
  }
  f += p.dt * p.energy.value(rho);
  return f;
}

double node_residual(const NodeProblem& p, double rho) {
  const double r = p.r;
  // Mobility terms are evaluated at the clipped density, which extends
  // the one-sided limit continuously down to rho = 0 (the log-mean
  // partials are discontinuous exactly at the origin).
  const double rv = std::max(rho, p.rho_min);
  double g = (rho - r * p.rho_bar) / r;
  if (p.m0_bar != 0.0) {
    const double v = p.v1x.value(rv), dv = p.v1x.deriv(rv);
    g -= r * r * p.m0_bar * p.m0_bar * dv / (2.0 * (r + v) * (r + v));
  }
  if (p.m1_bar != 0.0) {
    const double v = p.v1y.value(rv), dv = p.v1y.deriv(rv);
    g -= r * r * p.m1_bar * p.m1_bar * dv / (2.0 * (r + v) * (r + v));
  }
  for (int q = 0; q < p.n_reactions; ++q) {
    const auto& rx = p.reactions[q];
    if (rx.s_bar == 0.0) continue;
    const double v = rx.v2.value(rv), dv = rx.v2.deriv(rv);
    g -= r * r * rx.s_bar * rx.s_bar * dv / (2.0 * (r + v) * (r + v));
  }
  g += p.dt * p.energy.deriv(rho, p.rho_min);
  return g;
}

namespace {

// Slope of the residual for the Newton step; the mass-action second
// derivative is differenced numerically, which is accurate enough for a
// bracketed Newton iteration.
double residual_slope(const NodeProblem& p, double rho) {
  const double h = rho > 1e-280 ? 1e-7 * rho : 1e-7 * (rho + 1.0);
  const double lo = std::max(rho - h, 0.0);
  return (node_residual(p, rho + h) - node_residual(p, lo)) / (rho + h - lo);
}

}  // namespace

NodeSolveResult pointwise_density_solve(const NodeProblem& p,
                                        double rho_init) {
  NodeSolveResult res;

  // Active positivity constraint: nonnegative one-sided derivative at 0.
  const double g0 = node_residual(p, 0.0);
  if (g0 >= 0.0) {
    res.rho = 0.0;
    res.residual = g0;
    res.at_boundary = true;
    return res;
  }

  // Bracket [lo,hi] with g(lo) < 0 <= g(hi).
  const double r = p.r;
  double lo = 0.0;
  double hi = std::max(r * p.rho_bar, rho_init) +
              r * (std::abs(p.m0_bar) + std::abs(p.m1_bar)) + 1.0;
  for (int q = 0; q < p.n_reactions; ++q)
    hi += r * std::abs(p.reactions[q].s_bar);
  int expand = 0;
  while (node_residual(p, hi) < 0.0) {
    hi *= 2.0;
    if (++expand > 600) {
      std::ostringstream msg;
      msg << "pointwise_density_solve: no upper bracket (rho_bar=" << p.rho_bar
          << ", m_bar=(" << p.m0_bar << "," << p.m1_bar << "), hi=" << hi
          << ")";
      throw std::runtime_error(msg.str());
    }
  }

  double x = rho_init;
  if (!(x > lo) || !(x < hi)) x = 0.5 * (lo + hi);
  if (x > p.rho_max) x = p.rho_max;

  double g_prev = std::numeric_limits<double>::max();
  for (int it = 0; it < p.newton_maxit; ++it) {
    const double g = node_residual(p, x);
    res.iterations = it + 1;
    if (g < 0.0)
      lo = x;
    else
      hi = x;
    if (std::abs(g) <= p.newton_tol) {
      res.rho = x;
      res.residual = std::abs(g);
      return res;
    }
    // A Newton step is accepted only inside the bracket and only while
    // the residual keeps decreasing; otherwise bisect, which shrinks
    // the bracket unconditionally.
    double xn = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(g) <= 0.5 * g_prev) {
      const double gp = residual_slope(p, x);
      if (gp > 0.0) xn = x - g / gp;
    }
    if (!std::isfinite(xn) || xn <= lo || xn >= hi || xn > p.rho_max) {
      xn = 0.5 * (lo + hi);
      res.bisected = true;
    }
    g_prev = std::abs(g);
    if (xn == x) break;  // bracket exhausted at machine precision
    x = xn;
  }
  // Polish by plain bisection if the mixed loop ran out of budget.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double g = node_residual(p, mid);
    if (std::abs(g) <= p.newton_tol) {
      res.rho = mid;
      res.residual = std::abs(g);
      res.bisected = true;
      return res;
    }
    if (g < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  x = 0.5 * (lo + hi);
  res.rho = x;
  res.residual = std::abs(node_residual(p, x));
  return res;
}

}  // namespace gradflow::alg2
