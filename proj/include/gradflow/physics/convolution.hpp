#pragma once

#include <functional>
#include <memory>

#include "gradflow/fem/discretization.hpp"

namespace gradflow::physics {

enum class ConvolutionMode { Direct, Fft };

/// Discrete interaction convolution
///   (W*rho)(xi_i) = sum_j W(xi_i - eta_j) rho(eta_j) w_j,
/// with the Gauss-Legendre nodes xi_i as targets. For smooth kernels the
/// source points eta_j are the same nodes; for singular kernels the
/// source integration uses the (k+2)-point per-cell rule, whose node set
/// is disjoint from the target set, so W is never evaluated at zero.
///
/// The uniform mesh makes the node lattice a union of per-cell cosets of
/// a regular grid, so the double sum splits into coset-pair
/// cross-correlations over the cell indices; the Fft mode evaluates them
/// with zero-padded transforms, the Direct mode by plain summation.
class Convolution {
 public:
  Convolution(const fem::Discretization& disc,
              std::function<double(double, double)> kernel, bool singular,
              ConvolutionMode mode);
  ~Convolution();

  Convolution(const Convolution&) = delete;
  Convolution& operator=(const Convolution&) = delete;

  ConvolutionMode mode() const;

  /// Not safe for concurrent calls on the same instance (shared
  /// transform scratch); deterministic for fixed input.
  fem::QuadField apply(const fem::QuadField& rho) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gradflow::physics
