#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rswave {

/// One declarative document driving every subcommand. Unknown keys are
/// rejected; range and cross-field constraints are validated before any
/// compute. Zero values for grid.n / grid.L mean "derive from the run
/// parameters" (see the README for the sizing rules).
struct RunConfig {
  int schema_version = 1;
  std::string scenario = "default";
  int dim = 1;

  // [spectrum]  rhat(xi) = amplitude exp(-|xi|^2 / (2 sigma^2))
  std::string spectrum_kind = "gaussian";
  double spectrum_amplitude = 1.0;
  double spectrum_sigma = 1.0;

  // [gap]  constant: gamma0;  quadratic: gamma0 + gamma2 |xi|^2
  std::string gap_kind = "quadratic";
  double gap_gamma0 = 1.0;
  double gap_gamma2 = 1.0;

  // [grid]
  int grid_n = 0;                   // 0 = auto (power of two)
  double grid_L = 0.0;              // 0 = auto
  double grid_xi_max_target = 9.0;  // frequency range the grid must resolve

  // wave scaling
  double eps = 0.1;
  double alpha = 0.5;
  double beta = 0.0;
  std::vector<double> t_macro_list = {1.0};
  double dt = 0.02;
  double width_factor = 40.0;

  // [profile]
  std::string profile_kind = "gaussian";
  double profile_amplitude = 1.0;
  double profile_sigma = 1.0;

  // ensemble
  int n_realizations = 128;
  std::uint64_t master_seed = 12345;
  int workers = 0;  // 0 = hardware concurrency
  std::vector<double> probes_xi = {0.0, 0.47123889803846897,
                                   0.94247779607693793};

  // [highfreq]
  double highfreq_cell = 0.1;  // probe cell width for E|Psi|^2 averaging

  // [kinetic]
  double kinetic_xi_max = 8.0;
  int kinetic_n_cells = 400;
  double kinetic_dt = 0.005;
  double kinetic_t = 1.0;
  int kinetic_k_max = 4;
  int kinetic_n_mc = 100000;
  int kinetic_n_particles = 200000;
  double kinetic_hist_lo = 0.15;
  double kinetic_hist_hi = 1.15;
  int kinetic_hist_cells = 10;

  // [wigner]
  double wigner_sigma_g = 0.5;   // spatial width of the test g
  double wigner_sigma_h = 1.0;   // frequency width of the test h
  double wigner_eta1 = 1.5;      // target spacing of the eta lattice
  double wigner_mom_cell = 0.1;  // particle momentum cell for the target

  // [field_stats]
  int field_paths = 10000;
  std::vector<double> field_lags = {0.0, 0.25, 0.5, 1.0, 2.0};
};

/// Parses and validates a config document. Throws ConfigError whose message
/// lists every violation with its key path.
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a hash of the canonical serialization (manifest provenance).
std::uint64_t config_hash(const RunConfig& cfg);

/// Cross-field constraints that only apply to a particular subcommand
/// (e.g. alpha + beta = 2 and alpha in (0,1) for `wigner`). Throws
/// ConfigError on violation.
void validate_for_command(const RunConfig& cfg, const std::string& command);

}  // namespace rswave
