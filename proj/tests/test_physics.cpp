#include <doctest.h>

#include <cmath>
#include <random>

#include "gradflow/physics/convolution.hpp"
#include "gradflow/physics/energy.hpp"
#include "gradflow/physics/logmean.hpp"
#include "gradflow/physics/reaction.hpp"

using namespace gradflow;
using physics::log_mean;
using physics::PowerMobility;
using physics::V2Family;

TEST_CASE("log_mean examples") {
  CHECK(log_mean(2.0, 2.0) == 2.0);
  CHECK(log_mean(std::exp(1.0), 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(log_mean(4.0, 1.0) ==
        doctest::Approx(3.0 / std::log(4.0)).epsilon(1e-14));
  CHECK(log_mean(0.0, 0.0) == 0.0);
  CHECK(log_mean(3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(log_mean(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("log_mean bounds, symmetry, scaling") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> mag(-6.0, 6.0);
  std::uniform_real_distribution<double> cdist(0.1, 10.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const double x = std::pow(10.0, mag(rng));
    const double y = std::pow(10.0, mag(rng));
    const double l = log_mean(x, y);
    CHECK(l >= std::sqrt(x * y) * (1.0 - 1e-13));
    CHECK(l <= 0.5 * (x + y) * (1.0 + 1e-13));
    CHECK(std::abs(l - log_mean(y, x)) <= 1e-14 * l);
    const double c = cdist(rng);
    CHECK(log_mean(c * x, c * y) == doctest::Approx(c * l).epsilon(1e-13));
  }
  // Near-equal arguments go through the series branch; compare against
  // the closed form d/log1p(d) evaluated on the rounded gap.
  for (double eps : {1e-12, 1e-8, 1e-5, 1e-4}) {
    const double d = (1.0 + eps) - 1.0;
    const double l = log_mean(1.0 + eps, 1.0);
    CHECK(l == doctest::Approx(d / std::log1p(d)).epsilon(5e-14));
  }
  CHECK(log_mean(1.0 + 1e-16, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("log_mean partial derivatives match finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> v(0.01, 10.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double x = v(rng), y = v(rng);
    const auto d = physics::log_mean_derivs(x, y);
    const double h = 1e-6 * std::max(x, y);
    const double fdx = (log_mean(x + h, y) - log_mean(x - h, y)) / (2 * h);
    const double fdy = (log_mean(x, y + h) - log_mean(x, y - h)) / (2 * h);
    CHECK(d.dx == doctest::Approx(fdx).epsilon(1e-6));
    CHECK(d.dy == doctest::Approx(fdy).epsilon(1e-6));
  }
  const auto at_eq = physics::log_mean_derivs(3.0, 3.0);
  CHECK(at_eq.dx == 0.5);
  CHECK(at_eq.dy == 0.5);
}

TEST_CASE("diffusion_term examples") {
  auto t1 = physics::diffusion_term(1.0, 1.0, 1.0);
  CHECK(t1.value == doctest::Approx(0.0));
  CHECK(t1.deriv == doctest::Approx(1.0));
  auto t2 = physics::diffusion_term(2.0, 2.0, 1.0);
  CHECK(t2.value == doctest::Approx(4.0));
  CHECK(t2.deriv == doctest::Approx(4.0));
  auto t3 = physics::diffusion_term(2.0, 3.0, 0.5);
  CHECK(t3.value == doctest::Approx(2.0));
  CHECK(t3.deriv == doctest::Approx(3.0));
  auto t0 = physics::diffusion_term(0.0, 1.0, 1.0);
  CHECK(t0.value == 0.0);
  CHECK(t0.deriv == -std::numeric_limits<double>::infinity());
  CHECK(physics::diffusion_term(0.0, 3.0, 1.0).value == 0.0);
  CHECK(physics::diffusion_term(0.0, 3.0, 1.0).deriv == 0.0);
}

TEST_CASE("mobility derivative consistency by finite differences") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> v(0.01, 10.0);
  std::vector<PowerMobility> v1s = {{1.0, 1.0}, {0.2, 2.0}, {0.5, 3.0}, {0.1, 4.0}};
  std::vector<V2Family> v2s = {
      V2Family::power(0.1, 0.0), V2Family::power(0.1, 1.0),
      V2Family::power(0.3, 0.7), V2Family::mass_action(0.1, 1.0, 0.1, 0.0),
      V2Family::mass_action(1.0, 2.0, 1.0, 1.0, false),  // Fisher-KPP form
      V2Family::mass_action(0.7, 1.0, 0.2, 3.0)};
  for (int rep = 0; rep < 300; ++rep) {
    const double rho = v(rng);
    const double h = 1e-6 * std::max(1.0, rho);
    for (const auto& m : v1s) {
      const double fd = (m.value(rho + h) - m.value(rho - h)) / (2 * h);
      CHECK(m.deriv(rho) == doctest::Approx(fd).epsilon(1e-6));
    }
    for (const auto& f : v2s) {
      const double fd = (f.value(rho + h) - f.value(rho - h)) / (2 * h);
      CHECK(f.deriv(rho) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("Fisher-KPP mobility equals its closed form") {
  const double mu = 0.5;
  const auto v2 = V2Family::mass_action(mu, 2.0, mu, 1.0, false);
  for (double rho : {0.3, 0.9, 1.0, 1.5, 4.0}) {
    const double expect =
        rho == 1.0 ? mu : mu * rho * (rho - 1.0) / std::log(rho);
    CHECK(v2.value(rho) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(v2.value(0.0) == 0.0);
}

TEST_CASE("reaction mobility examples") {
  // Two-species model X1 + 2 X2 <-> 3 X2 with k+ = 1, k- = 0.1.
  Eigen::MatrixXi alpha(1, 2), beta(1, 2);
  alpha << 1, 2;
  beta << 0, 3;
  Eigen::VectorXd kp(1), km(1), kappa(2), gamma(2);
  kp << 1.0;
  km << 0.1;
  kappa << 1.0, 0.1;
  gamma << 0.2, 0.1;
  const physics::ReactionNetwork ts(alpha, beta, kp, km, kappa, gamma);
  Eigen::VectorXd rho(2);
  rho << 1.0, 1.0;
  CHECK(physics::reaction_mobility(ts, 0, rho) ==
        doctest::Approx(0.9 / std::log(10.0)).epsilon(1e-12));
  rho.setZero();
  CHECK(physics::reaction_mobility(ts, 0, rho) == 0.0);

  // Reversible Gray-Scott, reaction 3 at the equilibrium initial state.
  Eigen::MatrixXi a(3, 4), b(3, 4);
  a << 1, 2, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0;
  b << 0, 3, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  Eigen::VectorXd kp3(3), km3(3), kap(4), gam(4);
  kp3 << 1.0, 8.4e-2, 2.4e-2;
  km3 << 1e-3, 8.4e-5, 2.4e-5;
  kap << 1.0, 1e-3, 1e-6, 1e-3;
  gam << 1.0, 0.01, 0.0, 0.0;
  const physics::ReactionNetwork gs(a, b, kp3, km3, kap, gam);
  Eigen::VectorXd rho4(4);
  rho4 << 1.0, 0.15, 1.0, 1000.0;
  CHECK(physics::reaction_mobility(gs, 2, rho4) ==
        doctest::Approx(0.024).epsilon(1e-12));

  // kappa inconsistent with the rates is rejected.
  Eigen::VectorXd bad_kappa(2);
  bad_kappa << 1.0, 1.0;
  CHECK_THROWS_AS(
      physics::ReactionNetwork(alpha, beta, kp, km, bad_kappa, gamma),
      std::invalid_argument);
}

TEST_CASE("energy_eval") {
  const fem::UniformMesh mesh(-1, 1, -1, 1, 4, 4);
  const fem::Discretization disc(mesh, 2, fem::BoundaryCondition::Neumann);
  const auto one = disc.interpolate([](double, double) { return 1.0; });
  const auto zero = fem::QuadField::Zero(disc.num_nodes()).eval();

  // U_1 = rho log rho vanishes at rho = 1; the detailed-balance entropy
  // rho(log rho - 1) integrates to -4 on this domain.
  physics::EnergySpec u1;
  u1.alpha = 1.0;
  u1.m = 1.0;
  CHECK(physics::energy_eval(disc, u1, one) == doctest::Approx(0.0));
  physics::EnergySpec ent;
  ent.entropy_form = true;
  ent.alpha = 1.0;
  ent.kappa = 1.0;
  CHECK(physics::energy_eval(disc, ent, one) ==
        doctest::Approx(-4.0).epsilon(1e-14));

  physics::EnergySpec drift;
  drift.drift = [](double x, double) { return x * x; };
  CHECK(physics::energy_eval(disc, drift, one) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(physics::energy_eval(disc, drift, zero) == 0.0);

  physics::EnergySpec inter;
  inter.kernel = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(physics::energy_eval(disc, inter, one),
                  std::invalid_argument);
}

TEST_CASE("convolution trivial kernels") {
  const fem::UniformMesh mesh(-1, 1, -1, 1, 4, 4);
  const fem::Discretization disc(mesh, 2, fem::BoundaryCondition::Neumann);
  const auto rho = disc.interpolate(
      [](double x, double y) { return 1.0 + 0.5 * x - 0.25 * x * y; });
  const double mass = disc.integral(rho);

  for (auto mode :
       {physics::ConvolutionMode::Direct, physics::ConvolutionMode::Fft}) {
    const physics::Convolution cst(
        disc, [](double, double) { return 3.0; }, false, mode);
    const auto out = cst.apply(rho);
    for (int q = 0; q < disc.num_nodes(); ++q)
      CHECK(out[q] == doctest::Approx(3.0 * mass).epsilon(1e-12));

    const physics::Convolution nil(
        disc, [](double, double) { return 0.0; }, false, mode);
    CHECK(nil.apply(rho).norm() == 0.0);
  }
}

TEST_CASE("convolution of the Gaussian kernel against the analytic value") {
  // Case-5 kernel, rho = 1 on [-4,4]^2: at the center the convolution is
  // -erf(4)^2 ~ -1 up to quadrature truncation.
  const fem::UniformMesh mesh(-4, 4, -4, 4, 16, 16);
  const fem::Discretization disc(mesh, 3, fem::BoundaryCondition::Neumann);
  const auto one = disc.interpolate([](double, double) { return 1.0; });
  const physics::Convolution conv(
      disc, [](double x, double y) { return -std::exp(-(x * x + y * y)) / M_PI; },
      false, physics::ConvolutionMode::Fft);
  const auto out = conv.apply(one);
  CHECK(std::abs(disc.eval(out, 0.0, 0.0) + 1.0) < 1e-6);
}

TEST_CASE("convolution symmetry under point reflection") {
  const fem::UniformMesh mesh(-1.5, 1.5, -1.5, 1.5, 6, 6);
  const fem::Discretization disc(mesh, 2, fem::BoundaryCondition::Neumann);
  const auto rho = disc.interpolate([](double x, double y) {
    return std::exp(-3.0 * (x * x + y * y));
  });
  const physics::Convolution conv(
      disc,
      [](double x, double y) {
        const double r2 = x * x + y * y;
        return 0.5 * r2 - 0.5 * std::log(r2);
      },
      true, physics::ConvolutionMode::Fft);
  const auto out = conv.apply(rho);
  const int k = disc.degree(), kp1 = k + 1;
  const auto& m = disc.mesh();
  const double scale = out.cwiseAbs().maxCoeff();
  for (int cy = 0; cy < m.ny; ++cy)
    for (int cx = 0; cx < m.nx; ++cx)
      for (int ly = 0; ly < kp1; ++ly)
        for (int lx = 0; lx < kp1; ++lx) {
          const int q =
              disc.node_index(cy * m.nx + cx, ly * kp1 + lx);
          const int qr = disc.node_index(
              (m.ny - 1 - cy) * m.nx + (m.nx - 1 - cx),
              (k - ly) * kp1 + (k - lx));
          CHECK(std::abs(out[q] - out[qr]) <= 1e-12 * scale);
        }
}

TEST_CASE("fft convolution equals the direct double sum") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> val(0.0, 2.0);
  for (int k : {1, 2, 3}) {
    for (int n : {3, 5, 8}) {
      const fem::UniformMesh mesh(-1.5, 1.5, -1.5, 1.5, n, n);
      const fem::Discretization disc(mesh, k, fem::BoundaryCondition::Neumann);
      fem::QuadField rho(disc.num_nodes());
      for (int q = 0; q < disc.num_nodes(); ++q) rho[q] = val(rng);

      auto smooth = [](double x, double y) {
        return std::exp(-(x * x + y * y));
      };
      auto singular = [](double x, double y) {
        const double r2 = x * x + y * y;
        return 0.5 * r2 - 0.5 * std::log(r2);
      };
      for (int s = 0; s < 2; ++s) {
        const bool is_singular = s == 1;
        auto kern = is_singular ? std::function<double(double, double)>(singular)
                                : std::function<double(double, double)>(smooth);
        const physics::Convolution fft(disc, kern, is_singular,
                                       physics::ConvolutionMode::Fft);
        const physics::Convolution direct(disc, kern, is_singular,
                                          physics::ConvolutionMode::Direct);
        const auto a = fft.apply(rho);
        const auto b = direct.apply(rho);
        CHECK((a - b).norm() <= 1e-11 * b.norm());
      }
    }
  }
}
