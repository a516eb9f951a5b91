#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "rswave/fft.hpp"
#include "rswave/grid.hpp"
#include "rswave/rng.hpp"
#include "rswave/spectral_model.hpp"

namespace rswave {

/// Per-mode bookkeeping shared by all realizations on one (model, grid):
/// stationary variances, decay rates, and the Hermitian pair structure.
/// Immutable once built.
struct ModeTable {
  FieldGrid grid;
  std::vector<double> stat_var;  // s_k; zero for modes beyond the cutoff
  std::vector<double> decay;     // g_k = gap(xi_k)
  std::vector<std::uint32_t> conj_index;  // Hermitian partner per mode
  // Active modes only (s_k > 0): conjugate pairs (primary < partner) and
  // self-conjugate indices (zero/Nyquist rows), kept in deterministic order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::uint32_t> self_conjugate;
};

std::shared_ptr<const ModeTable> make_mode_table(const SpectralModel& model,
                                                 const FieldGrid& grid);

/// Fourier modes of the potential at one instant. Hermitian symmetry is
/// maintained exactly; each Fourier mode is a stationary Ornstein-Uhlenbeck
/// process advanced by exact updates (no time-discretization bias).
/// One FieldState per realization, owned by its worker.
class FieldState {
 public:
  FieldState(std::shared_ptr<const ModeTable> table, RngStream rng);

  const FieldGrid& grid() const { return table_->grid; }
  const ModeTable& table() const { return *table_; }
  double time() const { return time_; }
  std::span<const std::complex<double>> modes() const { return modes_; }
  std::complex<double> mode(std::size_t k) const { return modes_[k]; }

  /// Exact OU update over dt >= 0:
  ///   v_k <- e^{-g_k dt} v_k + sqrt(s_k (1 - e^{-2 g_k dt})) zeta_k
  /// with fresh Hermitian-symmetric unit complex Gaussians zeta.
  void advance(double dt);

  /// True when the potential is identically zero (null spectrum).
  bool is_null() const { return table_->pairs.empty() && table_->self_conjugate.empty(); }

  /// Inverse DFT, V(x) = sum_k v_k e^{i xi_k . x}. Verifies Hermitian
  /// symmetry first and throws NumericalError on violation.
  std::vector<double> realize(Fft& fft) const;
  void realize(Fft& fft, std::span<double> out) const;

  /// For tests: overwrite one conjugate mode pair.
  void set_mode_pair(std::size_t k, std::complex<double> value);

 private:
  void refresh_coefficients(double dt);

  std::shared_ptr<const ModeTable> table_;
  RngStream rng_;
  double time_ = 0.0;
  std::vector<std::complex<double>> modes_;
  // advance() coefficient cache for the most recent dt
  double cached_dt_ = -1.0;
  std::vector<double> coef_decay_;
  std::vector<double> coef_noise_;
  std::vector<double> coef_decay_self_;
  std::vector<double> coef_noise_self_;
};

/// Draws a stationary sample: independent complex Gaussians per conjugate
/// pair with E|v_k|^2 = s_k = rhat(xi_k) / L^d, real Gaussians on the
/// self-conjugate rows. Requires a validated model.
FieldState sample_stationary(const SpectralModel& model, const FieldGrid& grid,
                             RngStream rng);
FieldState sample_stationary(std::shared_ptr<const ModeTable> table,
                             RngStream rng);

/// One recorded snapshot of a realized field.
struct FieldSnapshot {
  double time = 0.0;
  std::vector<double> values;
};
using FieldTrajectory = std::vector<FieldSnapshot>;

/// Unbiased ensemble-and-space averaged covariance estimate at time lag
/// `lag` and grid-aligned spatial shift `shift_cells`; returns
/// (estimate, stderr). Requires >= 2 paths, each containing at least one
/// snapshot pair separated by `lag`.
std::pair<double, double> empirical_covariance(
    std::span<const FieldTrajectory> paths, double lag,
    const std::array<int, 3>& shift_cells, const FieldGrid& grid);

}  // namespace rswave
