#include "rswave/spectral_model.hpp"

#include <cmath>
#include <sstream>

#include "rswave/errors.hpp"

namespace rswave {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Cutoff radius (in units of sigma) with a Gaussian radial tail below 1e-12
// of the total integral, per dimension.
double cutoff_factor(int dim) {
  switch (dim) {
    case 1: return 7.5;
    case 2: return 8.1;
    default: return 8.6;
  }
}

}  // namespace

SpectralModel::SpectralModel(int dim, SpectrumKind spectrum_kind,
                             double amplitude, double sigma, GapKind gap_kind,
                             double gamma0, double gamma2)
    : dim_(dim),
      spectrum_kind_(spectrum_kind),
      amplitude_(amplitude),
      sigma_(sigma),
      gap_kind_(gap_kind),
      gamma0_(gamma0),
      gamma2_(gamma2) {
  if (dim < 1 || dim > 3) throw ConfigError("spectral model: dim must be 1..3");
  if (amplitude < 0) throw ConfigError("spectral model: amplitude must be >= 0");
  if (sigma <= 0) throw ConfigError("spectral model: sigma must be > 0");
  if (gamma0 < 0 || gamma2 < 0)
    throw ConfigError("spectral model: gap coefficients must be >= 0");
  cutoff_ = cutoff_factor(dim) * sigma_;
  report_ = build_report();
}

double SpectralModel::rhat(const Vec& xi) const {
  if (amplitude_ == 0.0) return 0.0;
  const double r2 = xi.norm2();
  if (r2 > cutoff_ * cutoff_) return 0.0;
  return amplitude_ * std::exp(-r2 / (2.0 * sigma_ * sigma_));
}

double SpectralModel::gap(const Vec& xi) const {
  if (gap_kind_ == GapKind::constant) return gamma0_;
  return gamma0_ + gamma2_ * xi.norm2();
}

double SpectralModel::time_spectrum(double t, const Vec& xi) const {
  const double r = rhat(xi);
  if (r == 0.0) return 0.0;
  return std::exp(-gap(xi) * std::abs(t)) * r;
}

double SpectralModel::full_spectrum(double omega, const Vec& xi) const {
  const double r = rhat(xi);
  if (r == 0.0) return 0.0;
  const double g = gap(xi);
  if (g == 0.0)
    throw NumericalError("full_spectrum: degenerate point (gap=0, rhat>0)");
  return 2.0 * g * r / (omega * omega + g * g);
}

double SpectralModel::covariance(double t, const Vec& x,
                                 const quad::Options& opt) const {
  if (amplitude_ == 0.0) return 0.0;
  double lo[3], hi[3];
  for (int i = 0; i < dim_; ++i) {
    lo[i] = -cutoff_;
    hi[i] = cutoff_;
  }
  auto integrand = [&](const double* p) {
    Vec xi = Vec::zero(dim_);
    for (int i = 0; i < dim_; ++i) xi[i] = p[i];
    const double phase = dot(xi, x);
    return std::complex<double>(std::cos(phase), std::sin(phase)) *
           time_spectrum(t, xi);
  };
  auto res = quad::integrate_box(
      std::function<std::complex<double>(const double*)>(integrand),
      std::span<const double>(lo, static_cast<std::size_t>(dim_)),
      std::span<const double>(hi, static_cast<std::size_t>(dim_)), opt);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "covariance quadrature did not converge (err=" << res.abs_error
        << ")";
    throw NumericalError(msg.str());
  }
  const double norm = std::pow(kTwoPi, -dim_);
  if (std::abs(res.value.imag()) >
      100.0 * (res.abs_error + 1e-14 * std::abs(res.value.real()))) {
    throw NumericalError("covariance: imaginary part above tolerance");
  }
  return norm * res.value.real();
}

ValidationReport SpectralModel::build_report() const {
  ValidationReport rep;

  // Deterministic probe lattice plus pseudo-random probes.
  std::vector<Vec> probes;
  const int per_dim = dim_ == 1 ? 65 : (dim_ == 2 ? 17 : 9);
  const double step = 2.0 * cutoff_ / (per_dim - 1);
  std::vector<int> idx(static_cast<std::size_t>(dim_), 0);
  for (;;) {
    Vec xi = Vec::zero(dim_);
    for (int i = 0; i < dim_; ++i) xi[i] = -cutoff_ + idx[static_cast<std::size_t>(i)] * step;
    probes.push_back(xi);
    int axis = 0;
    while (axis < dim_ && ++idx[static_cast<std::size_t>(axis)] == per_dim) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == dim_) break;
  }
  probes.push_back(Vec::zero(dim_));
  std::uint64_t h = 0x6b43a9b5u;
  for (int i = 0; i < 100; ++i) {
    Vec xi = Vec::zero(dim_);
    for (int k = 0; k < dim_; ++k) {
      h = h * 6364136223846793005ULL + 1442695040888963407ULL;
      xi[k] = (static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0) * cutoff_;
    }
    probes.push_back(xi);
  }

  rep.nonneg_ok = true;
  rep.even_ok = true;
  rep.linf_sup = 0.0;
  for (const auto& xi : probes) {
    const double r = rhat(xi);
    const double g = gap(xi);
    if (r < 0.0 || g < 0.0) rep.nonneg_ok = false;
    if (std::abs(r - rhat(-xi)) > 1e-12 * (1.0 + std::abs(r))) rep.even_ok = false;
    if (std::abs(g - gap(-xi)) > 1e-12 * (1.0 + std::abs(g))) rep.even_ok = false;
    if (r > 0.0) {
      if (g == 0.0) {
        rep.degenerate_points.push_back(xi);
      } else {
        rep.linf_sup = std::max(rep.linf_sup, r / g);
      }
    }
  }
  // Bounded means no degenerate point and a finite lattice supremum.
  rep.linf_ok = rep.degenerate_points.empty() && std::isfinite(rep.linf_sup);

  if (amplitude_ == 0.0) {
    rep.l1_integral = 0.0;
    rep.l1_error = 0.0;
    rep.l1_ok = true;
    return rep;
  }

  if (!rep.degenerate_points.empty()) {
    rep.l1_ok = false;
    return rep;
  }

  double lo[3], hi[3];
  for (int i = 0; i < dim_; ++i) {
    lo[i] = -cutoff_;
    hi[i] = cutoff_;
  }
  quad::Options opt;
  opt.rel_tol = 1e-8;
  opt.max_segments = 800;
  auto res = quad::integrate_box(
      std::function<double(const double*)>([&](const double* p) {
        Vec xi = Vec::zero(dim_);
        for (int i = 0; i < dim_; ++i) xi[i] = p[i];
        const double r = rhat(xi);
        if (r == 0.0) return 0.0;
        return r / gap(xi);
      }),
      std::span<const double>(lo, static_cast<std::size_t>(dim_)),
      std::span<const double>(hi, static_cast<std::size_t>(dim_)), opt);
  rep.l1_integral = res.value;
  rep.l1_error = res.abs_error;
  rep.l1_ok = res.converged && std::isfinite(res.value);
  return rep;
}

void SpectralModel::ensure_valid() const {
  if (!report_.passed())
    throw ConfigError("spectral model fails validation: " + report_.summary());
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (passed() ? "pass" : "FAIL") << " l1=" << l1_integral
     << (l1_ok ? "" : " [l1 not integrable]") << " sup=" << linf_sup
     << (linf_ok ? "" : " [unbounded]") << (nonneg_ok ? "" : " [negative]")
     << (even_ok ? "" : " [not even]");
  if (!degenerate_points.empty())
    os << " [" << degenerate_points.size() << " degenerate point(s)]";
  return os.str();
}

}  // namespace rswave
