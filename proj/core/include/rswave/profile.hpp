#pragma once

#include <complex>

#include "rswave/vec.hpp"

namespace rswave {

enum class ProfileKind { gaussian, gaussian_hermite };

/// Schwartz-class initial profile, specified through its Fourier transform
/// phi0hat. Built-ins:
///   gaussian:         A exp(-|xi|^2 / (2 sigma^2))
///   gaussian_hermite: A (xi_1 / sigma) exp(-|xi|^2 / (2 sigma^2))
class InitialProfile {
 public:
  InitialProfile(int dim, ProfileKind kind, double amplitude, double sigma);

  int dim() const { return dim_; }
  ProfileKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double sigma() const { return sigma_; }

  std::complex<double> phi0hat(const Vec& xi) const;

  /// Cached ||phi0hat||_2^2 = integral of |phi0hat|^2 d xi (by quadrature).
  double l2norm_sq() const { return l2norm_sq_; }

  /// Radius beyond which |phi0hat| is negligible (< 1e-12 of peak).
  double support_radius() const { return support_radius_; }

 private:
  int dim_;
  ProfileKind kind_;
  double amplitude_;
  double sigma_;
  double l2norm_sq_;
  double support_radius_;
};

}  // namespace rswave
