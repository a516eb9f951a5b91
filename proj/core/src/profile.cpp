#include "rswave/profile.hpp"

#include <cmath>

#include "rswave/errors.hpp"
#include "rswave/quadrature.hpp"

namespace rswave {

InitialProfile::InitialProfile(int dim, ProfileKind kind, double amplitude,
                               double sigma)
    : dim_(dim), kind_(kind), amplitude_(amplitude), sigma_(sigma) {
  if (dim < 1 || dim > 3) throw ConfigError("profile: dim must be 1..3");
  if (sigma <= 0) throw ConfigError("profile: sigma must be > 0");
  if (amplitude < 0) throw ConfigError("profile: amplitude must be >= 0");

  support_radius_ = 8.5 * sigma_;

  // Rapid-decay invariant: the profile is negligible at the support edge.
  double peak = 0.0, edge = 0.0;
  for (int i = 0; i <= 64; ++i) {
    Vec xi = Vec::zero(dim_);
    xi[0] = support_radius_ * i / 64.0;
    peak = std::max(peak, std::abs(phi0hat(xi)));
  }
  {
    Vec xi = Vec::zero(dim_);
    xi[0] = support_radius_;
    edge = std::abs(phi0hat(xi));
  }
  if (amplitude_ > 0 && edge > 1e-10 * peak)
    throw ConfigError("profile: does not decay within the support radius");

  // || phi0hat ||_2^2 by quadrature over the support box.
  double lo[3], hi[3];
  for (int i = 0; i < dim_; ++i) {
    lo[i] = -support_radius_;
    hi[i] = support_radius_;
  }
  quad::Options opt;
  opt.rel_tol = 1e-10;
  auto res = quad::integrate_box(
      std::function<double(const double*)>([&](const double* q) {
        Vec xi = Vec::zero(dim_);
        for (int i = 0; i < dim_; ++i) xi[i] = q[i];
        return std::norm(phi0hat(xi));
      }),
      std::span<const double>(lo, static_cast<std::size_t>(dim_)),
      std::span<const double>(hi, static_cast<std::size_t>(dim_)), opt);
  l2norm_sq_ = res.value;
}

std::complex<double> InitialProfile::phi0hat(const Vec& xi) const {
  const double r2 = xi.norm2();
  const double g = amplitude_ * std::exp(-r2 / (2.0 * sigma_ * sigma_));
  switch (kind_) {
    case ProfileKind::gaussian:
      return {g, 0.0};
    case ProfileKind::gaussian_hermite:
      return {g * xi[0] / sigma_, 0.0};
  }
  return {0.0, 0.0};
}

}  // namespace rswave
