#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rswave/config.hpp"
#include "rswave/kinetic.hpp"
#include "rswave/output.hpp"
#include "rswave/profile.hpp"
#include "rswave/random_field.hpp"
#include "rswave/spectral_model.hpp"
#include "rswave/stats.hpp"
#include "rswave/wave_solver.hpp"

namespace rswave {

SpectralModel model_from(const RunConfig& cfg);
InitialProfile profile_from(const RunConfig& cfg);

/// Grid sizing: L covers the slowly varying profile (width_factor / kappa);
/// a Wigner run additionally refines the frequency lattice so the eta
/// spacing 2 dxi / eps^2 hits wigner.eta1. n then resolves frequencies up
/// to grid.xi_max_target. Explicit grid.n / grid.L win when nonzero.
struct GridPlan {
  FieldGrid grid;
  WaveParams params;
  double psi_dxi = 0.0;  // spacing of the psi-frequency lattice, dxi / kappa
};
GridPlan plan_grid(const RunConfig& cfg, double eps, bool wigner_mode);

/// Observation plan and raw per-realization records of the split-step runs.
struct EnsembleSpec {
  const SpectralModel* model = nullptr;
  const InitialProfile* profile = nullptr;
  FieldGrid grid;
  WaveParams params;
  double dt = 0.0;
  double width_factor = 40.0;
  std::vector<double> micro_times;  // ascending observation times
  int n_realizations = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::vector<std::size_t> low_probes;   // psi recorded at these mode indices
  std::vector<std::size_t> high_probes;  // Psi recorded at these mode indices
  int window = -1;  // psi window half-width in psi-lattice modes, < 0 = off
};

struct RealizationData {
  std::vector<std::vector<std::complex<double>>> low;     // [time][probe]
  std::vector<std::vector<std::complex<double>>> high;    // [time][probe]
  std::vector<std::vector<std::complex<double>>> window;  // [time][mode]
  double mass_drift = 0.0;  // max relative drift across observations
  double tail_frac = 0.0;   // max aliasing indicator across observations
};

std::vector<RealizationData> run_ensemble(const EnsembleSpec& spec);

/// One comparison: (estimate, stderr) against (target, target uncertainty),
/// with the z-score |estimate - target| / combined error.
struct StatRow {
  double t = 0.0;
  double xi = 0.0;
  std::string stat;
  std::complex<double> estimate{0.0, 0.0};
  double se = 0.0;
  std::complex<double> target{0.0, 0.0};
  double target_err = 0.0;
  double z = 0.0;
};

Table rows_to_table(const std::string& name,
                    const std::vector<StatRow>& rows);

struct EnsembleDiagnostics {
  double max_mass_drift = 0.0;
  double max_tail_frac = 0.0;
};

/// Low-frequency homogenization check: ensemble mean of psi against
/// phi0hat(xi) e^{-D(0) t / 2} and raw second moment against
/// |phi0hat(xi)|^2 e^{-Re D(0) t}, per (t, probe).
struct HomogenizationResult {
  std::vector<StatRow> rows;
  std::complex<double> d0;
  EnsembleDiagnostics diag;
};
HomogenizationResult run_homogenization(const RunConfig& cfg);
HomogenizationResult run_homogenization(const RunConfig& cfg, double eps);

/// High-frequency Gaussianity check at nonzero probes: mean -> 0,
/// |E Psi^2| / E |Psi|^2 -> 0, kurtosis ratio -> 2, and the cell-averaged
/// E |Psi|^2 against the scattering series.
struct HighFreqResult {
  std::vector<StatRow> rows;
  EnsembleDiagnostics diag;
};
HighFreqResult run_high_freq(const RunConfig& cfg);

/// Corrector fluctuation check: E |U|^2 against the series at xi = 0 and
/// the non-conjugated moment E U^2 against the pseudo-variance for the
/// configured alpha.
struct CorrectorResult {
  std::vector<StatRow> rows;
  EnsembleDiagnostics diag;
};
CorrectorResult run_corrector(const RunConfig& cfg);

/// Wigner functional check at cfg.eps for two built-in band-limited test
/// functions; targets come from the particle-method cloud.
struct WignerRow {
  double eps = 0.0;
  double t = 0.0;
  int test_id = 0;
  std::string stat;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  double target_err = 0.0;
  double z = 0.0;
};
struct WignerResult {
  std::vector<WignerRow> rows;
  EnsembleDiagnostics diag;
};
WignerResult run_wigner(const RunConfig& cfg);
Table wigner_table(const std::vector<WignerRow>& rows);

/// Kinetic laboratory tables: atom decay curve, final grid profile,
/// per-order series contributions, and the three-route momentum-cell
/// comparison (series / particles / grid solver).
struct KineticCell {
  double lo = 0.0, hi = 0.0;
  double series = 0.0, series_err = 0.0, series_trunc = 0.0;
  double particles = 0.0, particles_err = 0.0;
  double evolve = 0.0;
};
struct KineticRunResult {
  std::vector<Table> tables;
  std::vector<KineticCell> cells;
  double atom_final = 0.0;
  double atom_target = 0.0;  // closed-form exponential at the quadrature rate
  double mass_drift = 0.0;   // relative drift of the grid solver total mass
  double min_what = 0.0;     // most negative grid density seen
};
KineticRunResult run_kinetic(const RunConfig& cfg);

/// Field statistics table: covariance estimates at the configured lags
/// against the quadrature target.
std::vector<Table> run_field_stats(const RunConfig& cfg);

}  // namespace rswave
