#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "rswave/profile.hpp"
#include "rswave/rng.hpp"
#include "rswave/spectral_model.hpp"
#include "rswave/vec.hpp"

namespace rswave {

/// Collision rate density from xi into p:
///   K(xi -> p) = (2 pi)^{-d} Rhat((|p|^2 - |xi|^2)/2, p - xi).
/// Symmetric in (xi, p) exactly, including in floating point; integrates in
/// p to Re D(xi). Throws at a degenerate point of the model.
double collision_kernel(const SpectralModel& model, const Vec& p,
                        const Vec& xi);

/// Radial lookup table of the total scattering rate Re D(|xi|), with the
/// uniform envelope constants used for truncation bounds.
class ScatteringRate {
 public:
  ScatteringRate(const SpectralModel& model, double max_radius, int n_nodes);

  double operator()(double radius) const;
  double at(const Vec& xi) const;

  /// Uniform bound sup_xi Re D(xi) <= (2 pi)^{-d} integral of 2 rhat/gap.
  double dbar() const { return dbar_; }
  /// sup of the collision kernel, (2 pi)^{-d} 2 A / gamma0.
  double kernel_sup() const { return kernel_sup_; }

 private:
  double max_radius_;
  double dr_;
  std::vector<double> values_;
  double dbar_;
  double kernel_sup_;
};

/// Draws the post-jump momentum with density K(xi_from -> .) / Re D(xi_from)
/// by rejection from the spatial spectrum.
Vec sample_post_jump(const SpectralModel& model, RngStream& rng,
                     const Vec& xi_from);

/// Uniform 1-d frequency grid of cell centers (the grid solver is 1-d; the
/// series and particle routes work in any supported dimension).
struct KineticGrid {
  int n_cells = 0;
  double xi_max = 0.0;
  double delta() const { return 2.0 * xi_max / n_cells; }
  double center(int i) const { return -xi_max + (i + 0.5) * delta(); }
};

/// Nonnegative energy density on the frequency grid plus the singular
/// ballistic atom at xi = 0.
struct KineticState {
  KineticGrid grid;
  std::vector<double> what;    // density values at cell centers
  double delta_weight = 0.0;   // mass of the atom
  double time = 0.0;

  double grid_mass() const;
  double total_mass() const { return delta_weight + grid_mass(); }
};

/// Precomputed symmetrized collision operator for the 1-d grid. The atom
/// decays by its closed-form exponential and the released mass enters the
/// grid through the discrete kernel profile, so total mass is conserved
/// exactly up to roundoff.
class KineticOperator {
 public:
  KineticOperator(const SpectralModel& model, const KineticGrid& grid);

  /// Explicit Euler steps; requires dt * max_rate <= 0.9 (positivity).
  void evolve(KineticState& state, double dt, int n_steps) const;

  double atom_rate() const { return atom_rate_; }
  double max_rate() const { return max_rate_; }
  const KineticGrid& grid() const { return grid_; }

 private:
  KineticGrid grid_;
  std::vector<double> kernel_;     // K(xi_i -> xi_j), row-major, symmetric
  std::vector<double> row_rate_;   // sum_j K(xi_i -> xi_j) dxi
  std::vector<double> atom_gain_;  // K(xi_i -> 0)
  double atom_rate_ = 0.0;         // sum_i K(0 -> xi_i) dxi
  double max_rate_ = 0.0;
};

/// Monte Carlo estimate of the multiple-scattering series.
struct SeriesOrder {
  int order = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
};
struct SeriesResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double truncation_bound = 0.0;
  std::vector<SeriesOrder> orders;
};

/// Scattering part of the kinetic solution with point-mass initial data,
/// evaluated at (t, xi): sum over scattering orders k = 1 .. k_max of
/// time-simplex x momentum-chain integrals, sampled by uniform simplex
/// times and kernel-importance momenta. The truncation bound is the
/// (t dbar)^k / k! envelope of the dropped tail.
SeriesResult scattering_series(const SpectralModel& model,
                               const InitialProfile& profile, double t,
                               const Vec& xi, int k_max, int n_mc,
                               const ScatteringRate& rate, std::uint64_t seed,
                               std::uint64_t salt = 0, int workers = 1);

/// Jump-process particle method for the spatial kinetic equation: each
/// particle starts at (x, xi) = (0, 0), free-streams dx/dt = xi, jumps at
/// rate Re D(xi) with kernel-distributed post-jump momentum. n_jumps keeps
/// the ballistic (0 jumps) and scattering (>= 1) subclouds separable.
struct Particle {
  Vec x;
  Vec xi;
  double weight = 0.0;
  int n_jumps = 0;
};
struct ParticleCloud {
  std::vector<Particle> particles;
  double time = 0.0;
};

ParticleCloud transport_particles(const SpectralModel& model,
                                  const InitialProfile& profile, double t,
                                  int n_particles, const ScatteringRate& rate,
                                  std::uint64_t seed, std::uint64_t salt = 0,
                                  int workers = 1);

/// Weighted particle mass with momentum in [lo, hi) (1-d momentum cells);
/// scattering subcloud only when `scattering_only`. Returns (mass, stderr).
std::pair<double, double> momentum_cell_mass(const ParticleCloud& cloud,
                                             double lo, double hi,
                                             bool scattering_only);

/// Corrector pseudo-variance (the non-conjugated second moment of the
/// limiting fluctuation):
///   alpha in (0,1): 0
///   alpha = 1: -D(0,0) e^{-D(0) t} int phi0(xi-p) phi0(xi+p)
///              (1 - e^{-i|p|^2 t}) / (i |p|^2) dp
///   alpha > 1: -D(0,0) t e^{-D(0) t} int phi0(xi-p) phi0(xi+p) dp
/// (for alpha = 1 the inner time integral is evaluated in closed form).
std::complex<double> corrector_pseudovariance(const SpectralModel& model,
                                              const InitialProfile& profile,
                                              double t, const Vec& xi,
                                              double alpha, double tol = 1e-8);

}  // namespace rswave
