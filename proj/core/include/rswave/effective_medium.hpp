#pragma once

#include <complex>

#include "rswave/spectral_model.hpp"
#include "rswave/vec.hpp"

namespace rswave {

/// Effective coefficient with a quadrature error estimate.
struct DValue {
  std::complex<double> value{0.0, 0.0};
  double abs_error = 0.0;
};

/// Density of the effective coefficient:
///   d_density(p, xi) = 2 rhat(p) / ((2 pi)^d [gap(p) - i(|xi|^2-|xi-p|^2)/2]).
/// Re >= 0 everywhere. Throws NumericalError at a degenerate point.
std::complex<double> d_density(const SpectralModel& model, const Vec& p,
                               const Vec& xi);

/// Real part of d_density through the full-spectrum route,
///   (2 pi)^{-d} full_spectrum((|xi|^2-|xi-p|^2)/2, p);
/// agrees with Re d_density to 1e-12.
double re_d_density(const SpectralModel& model, const Vec& p, const Vec& xi);

/// Total coefficient: integral of d_density(., xi) over the cutoff box.
/// Throws NumericalError when the requested tolerance is not reached (the
/// message carries the best estimate).
DValue d_total(const SpectralModel& model, const Vec& xi, double tol = 1e-8);

/// d_total at xi = 0; Re > 0 whenever rhat is not identically zero.
DValue d_zero(const SpectralModel& model, double tol = 1e-8);

}  // namespace rswave
