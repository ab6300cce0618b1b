#pragma once

#include <cmath>

#include "gradflow/physics/logmean.hpp"

namespace gradflow::physics {

/// Transport mobility of the form c * rho^m with c >= 0, m >= 1.
struct PowerMobility {
  double coeff = 0.0;
  double expo = 1.0;

  bool is_zero() const { return coeff == 0.0; }

  double value(double rho) const {
    if (coeff == 0.0) return 0.0;
    if (expo == 1.0) return coeff * rho;
    return coeff * std::pow(rho, expo);
  }

  double deriv(double rho) const {
    if (coeff == 0.0) return 0.0;
    if (expo == 1.0) return coeff;
    return coeff * expo * std::pow(rho, expo - 1.0);
  }
};

/// Reaction mobility V2 as a function of a single density, covering the
/// families used by the solver:
///   Power:      c * rho^gamma            (gamma = 0 gives a constant)
///   MassAction: l(cx * rho^a, cy * rho^b) with the logarithmic mean l;
///               the coefficients fold in rates and frozen co-species.
/// The Fisher-KPP mobility mu*rho*(rho-1)/log(rho) is MassAction with
/// (cx, a, cy, b) = (mu, 2, mu, 1), and c*(rho-1)/log(rho) is
/// (c, 1, c, 0).
struct V2Family {
  enum class Kind { None, Power, MassAction };
  Kind kind = Kind::None;
  double c = 0.0, gamma = 0.0;
  double cx = 0.0, a = 0.0, cy = 0.0, b = 0.0;
  bool convex_certified = true;

  static V2Family none() { return {}; }
  static V2Family power(double c, double gamma) {
    V2Family f;
    f.kind = Kind::Power;
    f.c = c;
    f.gamma = gamma;
    f.convex_certified = (gamma >= 0.0 && gamma <= 1.0);
    return f;
  }
  static V2Family mass_action(double cx, double a, double cy, double b,
                              bool convex = true) {
    V2Family f;
    f.kind = Kind::MassAction;
    f.cx = cx;
    f.a = a;
    f.cy = cy;
    f.b = b;
    f.convex_certified = convex;
    return f;
  }

  bool active() const { return kind != Kind::None; }

  // rho^p with the mass-action convention 0^0 = 1.
  static double pw(double rho, double p) {
    if (p == 0.0) return 1.0;
    if (p == 1.0) return rho;
    return std::pow(rho, p);
  }

  double value(double rho) const {
    switch (kind) {
      case Kind::None:
        return 0.0;
      case Kind::Power:
        return c * pw(rho, gamma);
      case Kind::MassAction:
        return log_mean(cx * pw(rho, a), cy * pw(rho, b));
    }
    return 0.0;
  }

  double deriv(double rho) const {
    switch (kind) {
      case Kind::None:
        return 0.0;
      case Kind::Power:
        if (gamma == 0.0) return 0.0;
        return c * gamma * pw(rho, gamma - 1.0);
      case Kind::MassAction: {
        const double x = cx * pw(rho, a);
        const double y = cy * pw(rho, b);
        const auto lm = log_mean_derivs(x, y);
        double d = 0.0;
        if (a != 0.0) d += lm.dx * cx * a * pw(rho, a - 1.0);
        if (b != 0.0) d += lm.dy * cy * b * pw(rho, b - 1.0);
        return d;
      }
    }
    return 0.0;
  }
};

}  // namespace gradflow::physics
