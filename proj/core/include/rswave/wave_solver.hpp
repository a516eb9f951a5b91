#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "rswave/fft.hpp"
#include "rswave/grid.hpp"
#include "rswave/profile.hpp"
#include "rswave/random_field.hpp"
#include "rswave/vec.hpp"

namespace rswave {

struct WaveParams {
  double eps = 0.1;
  double alpha = 0.5;
  double kappa = 0.0;  // eps^alpha, filled by make()

  static WaveParams make(double eps, double alpha) {
    WaveParams p;
    p.eps = eps;
    p.alpha = alpha;
    p.kappa = std::pow(eps, alpha);
    return p;
  }
};

/// Wave field in the free-evolution interaction picture: the stored array is
/// chi(s, xi_k) = phihat(s, xi_k) exp(+i |xi_k|^2 s / 2), i.e. the
/// compensated field sampled at the grid wavevectors. Free evolution is the
/// identity in this representation, so phase compensation is exact by
/// construction and unitarity reduces to the potential substep.
class WaveState {
 public:
  WaveState(FieldGrid grid, WaveParams params);

  const FieldGrid& grid() const { return grid_; }
  const WaveParams& params() const { return params_; }
  double micro_time() const { return micro_time_; }
  std::span<const std::complex<double>> chi() const { return chi_; }
  std::span<std::complex<double>> chi_mut() { return chi_; }
  std::span<const double> xi_norm2() const { return xi_norm2_; }
  void set_micro_time(double s) { micro_time_ = s; }

  /// Mass of the macroscopic rescaled wave, kappa^d sum |chi_k|^2 / L^d;
  /// equals ||phi_0||_2^2 independently of kappa and is conserved along the
  /// evolution.
  double mass() const;

 private:
  FieldGrid grid_;
  WaveParams params_;
  double micro_time_ = 0.0;
  std::vector<std::complex<double>> chi_;
  std::vector<double> xi_norm2_;
};

/// Sets phihat(0, xi) = kappa^{-d} phi0hat(xi / kappa). Requires the box to
/// fit the slowly varying profile: L * kappa >= width_factor.
WaveState init_low_freq(const InitialProfile& profile, WaveParams params,
                        const FieldGrid& grid, double width_factor = 40.0);

/// Per-worker stepping workspace (FFT plans and scratch buffers).
class WaveStepper {
 public:
  explicit WaveStepper(const FieldGrid& grid);

  /// One Strang step over dt: half free step, field advance by dt/2, full
  /// potential step exp(-i eps V dt) read at the midpoint, field advance by
  /// dt/2, half free step. Every factor is unimodular, so the mass is exact
  /// up to FFT roundoff. A null potential leaves chi untouched bitwise.
  void step(WaveState& state, FieldState& field, double dt);

  /// Energy kappa^d integral of |grad phi|^2 + eps V |phi|^2 (spectral
  /// derivative; V read at the field's current time).
  double energy(const WaveState& state, const FieldState& field, double eps);

  /// Fraction of mass carried by the top 10% of frequencies; aliasing
  /// indicator for the resolution monitor.
  double tail_mass_fraction(const WaveState& state) const;

  Fft& fft() { return fft_; }

 private:
  Fft fft_;
  std::vector<std::complex<double>> buf_;
  std::vector<std::complex<double>> buf2_;
  std::vector<double> vreal_;
};

/// Rescaled compensated low-frequency values psi_eps(t, xi) = kappa^d
/// phihat(t/eps^2, kappa xi) e^{i kappa^2 |xi|^2 t / (2 eps^2)} at grid
/// probes (flat indices k, representing psi-frequency xi_k / kappa).
std::vector<std::complex<double>> compensate_low(
    const WaveState& state, std::span<const std::size_t> probes);

/// High-frequency compensated values Psi_eps(t, xi_k) = kappa^{d/2}
/// phihat(t/eps^2, xi_k) e^{i |xi_k|^2 t / (2 eps^2)}.
std::vector<std::complex<double>> compensate_high(
    const WaveState& state, std::span<const std::size_t> probes);

/// Centered, kappa^{-d/2}-rescaled fluctuation samples of one statistic
/// across the ensemble; the mean of the output is zero by construction.
std::vector<std::complex<double>> fluctuation(
    std::span<const std::complex<double>> psi_samples, double kappa, int dim);

/// Separable band-limited Wigner test function phi(x, xi) = g(x) h(xi),
/// supplied through ghat (the Fourier transform of g) and h.
struct WignerTest {
  std::function<std::complex<double>(const Vec&)> ghat;
  std::function<std::complex<double>(const Vec&)> h;
  double eta_cut = 8.0;  // |eta| beyond which ghat is negligible
  double xi_cut = 4.0;   // |xi| beyond which h is negligible
};

/// Discrete Wigner pairing of one realization's fluctuation field:
///   <W_eps, phi> = sum over centers xi and offsets eta (both on the
///   psi-frequency lattice, eta = 2 j dxi_psi / eps^beta) of
///   u(xi + eps^beta eta / 2) u*(xi - eps^beta eta / 2) ghat*(eta) h*(xi)
///   dxi deta / (2 pi)^d.
/// `u` holds fluctuation values on the contiguous mode window
/// [-window, window]^d of the psi-frequency lattice (flattened like
/// FieldGrid but with side 2*window+1, lowest mode first).
std::complex<double> wigner_pairing(std::span<const std::complex<double>> u,
                                    int window, int dim, double dxi_psi,
                                    double eps, double beta,
                                    const WignerTest& test);

}  // namespace rswave
