#pragma once

#include <string>
#include <vector>

#include "rswave/quadrature.hpp"
#include "rswave/vec.hpp"

namespace rswave {

enum class SpectrumKind { gaussian };
enum class GapKind { constant, quadratic };

struct ValidationReport {
  double l1_integral = 0.0;   // integral of rhat/gap over the cutoff ball
  double l1_error = 0.0;
  bool l1_ok = false;
  double linf_sup = 0.0;      // sup of rhat/gap over the probe lattice
  bool linf_ok = false;
  bool nonneg_ok = false;
  bool even_ok = false;
  std::vector<Vec> degenerate_points;  // gap == 0 with rhat > 0
  bool passed() const {
    return l1_ok && linf_ok && nonneg_ok && even_ok && degenerate_points.empty();
  }
  std::string summary() const;
};

/// Statistical law of the random potential: spatial power spectrum rhat,
/// spectral gap, and the cutoff radius beyond which rhat is treated as zero.
/// Immutable after construction; safe to share across workers.
class SpectralModel {
 public:
  /// rhat(xi) = amplitude * exp(-|xi|^2 / (2 sigma^2)),
  /// gap(xi)  = gamma0 (+ gamma2 |xi|^2 for GapKind::quadratic).
  SpectralModel(int dim, SpectrumKind spectrum_kind, double amplitude,
                double sigma, GapKind gap_kind, double gamma0, double gamma2);

  int dim() const { return dim_; }
  double cutoff() const { return cutoff_; }
  double amplitude() const { return amplitude_; }
  double sigma() const { return sigma_; }
  GapKind gap_kind() const { return gap_kind_; }
  double gamma0() const { return gamma0_; }
  double gamma2() const { return gamma2_; }
  bool is_null() const { return amplitude_ == 0.0; }

  double rhat(const Vec& xi) const;
  double gap(const Vec& xi) const;

  /// Spatial spectrum at time lag t: exp(-gap(xi) |t|) rhat(xi).
  double time_spectrum(double t, const Vec& xi) const;

  /// Full space-time (Lorentzian in omega) spectrum
  /// 2 gap(xi) rhat(xi) / (omega^2 + gap(xi)^2). Throws NumericalError at a
  /// degenerate point (gap == 0 with rhat > 0).
  double full_spectrum(double omega, const Vec& xi) const;

  /// Covariance R(t, x) by deterministic quadrature of the spatial spectrum
  /// over the cutoff ball. Throws NumericalError if the quadrature fails.
  double covariance(double t, const Vec& x,
                    const quad::Options& opt = {}) const;

  /// Standing-assumption checks (rhat/gap integrable and bounded, evenness,
  /// nonnegativity). Computed eagerly at construction so concurrent reads
  /// need no synchronization; failures are report entries, never exceptions.
  const ValidationReport& validate() const { return report_; }

  /// Throws ConfigError unless validate() passes.
  void ensure_valid() const;

 private:
  ValidationReport build_report() const;

  int dim_;
  SpectrumKind spectrum_kind_;
  double amplitude_;
  double sigma_;
  GapKind gap_kind_;
  double gamma0_;
  double gamma2_;
  double cutoff_;
  ValidationReport report_;
};

}  // namespace rswave
