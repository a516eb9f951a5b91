#include "rswave/effective_medium.hpp"

#include <cmath>
#include <sstream>

#include "rswave/errors.hpp"
#include "rswave/quadrature.hpp"

namespace rswave {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double half_phase(const Vec& p, const Vec& xi) {
  // (|xi|^2 - |xi - p|^2) / 2
  return 0.5 * (xi.norm2() - (xi - p).norm2());
}

DValue integrate_density(const SpectralModel& model, const Vec& xi,
                         double tol) {
  model.ensure_valid();
  const int d = model.dim();
  if (model.is_null()) return {};

  double lo[3], hi[3];
  for (int i = 0; i < d; ++i) {
    lo[i] = -model.cutoff();
    hi[i] = model.cutoff();
  }
  quad::Options opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * 1e-2;
  opt.max_segments = 4000;
  auto res = quad::integrate_box(
      std::function<std::complex<double>(const double*)>([&](const double* q) {
        Vec p = Vec::zero(d);
        for (int i = 0; i < d; ++i) p[i] = q[i];
        const double r = model.rhat(p);
        if (r == 0.0) return std::complex<double>(0.0, 0.0);
        return 2.0 * r /
               (std::complex<double>(model.gap(p), -half_phase(p, xi)));
      }),
      std::span<const double>(lo, static_cast<std::size_t>(d)),
      std::span<const double>(hi, static_cast<std::size_t>(d)), opt);

  const double norm = std::pow(kTwoPi, -d);
  DValue out{norm * res.value, norm * res.abs_error};
  if (!res.converged) {
    std::ostringstream msg;
    msg << "d_total quadrature tolerance not reached; best estimate ("
        << out.value.real() << ", " << out.value.imag()
        << "), err=" << out.abs_error;
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace

std::complex<double> d_density(const SpectralModel& model, const Vec& p,
                               const Vec& xi) {
  const double r = model.rhat(p);
  if (r == 0.0) return {0.0, 0.0};
  const double g = model.gap(p);
  if (g == 0.0)
    throw NumericalError("d_density: degenerate point (gap=0, rhat>0)");
  const double norm = std::pow(kTwoPi, -model.dim());
  return 2.0 * norm * r / std::complex<double>(g, -half_phase(p, xi));
}

double re_d_density(const SpectralModel& model, const Vec& p, const Vec& xi) {
  const double norm = std::pow(kTwoPi, -model.dim());
  return norm * model.full_spectrum(half_phase(p, xi), p);
}

DValue d_total(const SpectralModel& model, const Vec& xi, double tol) {
  return integrate_density(model, xi, tol);
}

DValue d_zero(const SpectralModel& model, double tol) {
  return integrate_density(model, Vec::zero(model.dim()), tol);
}

}  // namespace rswave
