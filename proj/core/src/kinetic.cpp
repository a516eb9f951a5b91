#include "rswave/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rswave/effective_medium.hpp"
#include "rswave/errors.hpp"
#include "rswave/parallel.hpp"
#include "rswave/quadrature.hpp"

namespace rswave {
namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

// Re D(xi) for a radial model by deterministic quadrature (the integrand is
// smooth and compactly supported by the cutoff).
double scattering_rate_exact(const SpectralModel& model, double radius) {
  const int d = model.dim();
  Vec xi = Vec::zero(d);
  xi[0] = radius;
  const double c = model.cutoff();
  auto f1 = [&](double p1, double p2, double p3) {
    Vec p = Vec::zero(d);
    p[0] = p1;
    if (d > 1) p[1] = p2;
    if (d > 2) p[2] = p3;
    if (model.rhat(p) == 0.0) return 0.0;
    return re_d_density(model, p, xi);
  };
  if (d == 1) {
    return quad::composite_gauss(
        std::function<double(double)>([&](double p) { return f1(p, 0, 0); }),
        -c, c, 64);
  }
  if (d == 2) {
    return quad::composite_gauss(
        std::function<double(double)>([&](double p1) {
          return quad::composite_gauss(
              std::function<double(double)>(
                  [&](double p2) { return f1(p1, p2, 0); }),
              -c, c, 24);
        }),
        -c, c, 24);
  }
  return quad::composite_gauss(
      std::function<double(double)>([&](double p1) {
        return quad::composite_gauss(
            std::function<double(double)>([&](double p2) {
              return quad::composite_gauss(
                  std::function<double(double)>(
                      [&](double p3) { return f1(p1, p2, p3); }),
                  -c, c, 10);
            }),
            -c, c, 10);
      }),
      -c, c, 10);
}

}  // namespace

double collision_kernel(const SpectralModel& model, const Vec& p,
                        const Vec& xi) {
  const double omega = 0.5 * (p.norm2() - xi.norm2());
  const Vec q = p - xi;
  if (model.rhat(q) == 0.0) return 0.0;
  const double norm = std::pow(kTwoPi, -model.dim());
  return norm * model.full_spectrum(omega, q);
}

ScatteringRate::ScatteringRate(const SpectralModel& model, double max_radius,
                               int n_nodes) {
  model.ensure_valid();
  if (n_nodes < 2) throw ConfigError("ScatteringRate: need >= 2 nodes");
  max_radius_ = max_radius;
  dr_ = max_radius / (n_nodes - 1);
  values_.resize(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i)
    values_[static_cast<std::size_t>(i)] =
        scattering_rate_exact(model, i * dr_);

  const double norm = std::pow(kTwoPi, -model.dim());
  dbar_ = norm * 2.0 * model.validate().l1_integral;
  kernel_sup_ = model.gamma0() > 0.0
                    ? norm * 2.0 * model.amplitude() / model.gamma0()
                    : 0.0;
}

double ScatteringRate::operator()(double radius) const {
  const double r = std::abs(radius);
  if (r >= max_radius_) return values_.back();
  const double u = r / dr_;
  const auto i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

double ScatteringRate::at(const Vec& xi) const {
  return (*this)(std::sqrt(xi.norm2()));
}

Vec sample_post_jump(const SpectralModel& model, RngStream& rng,
                     const Vec& xi_from) {
  const int d = model.dim();
  const double sigma = model.sigma();
  const double gamma0 = model.gamma0();
  if (gamma0 <= 0.0)
    throw NumericalError("sample_post_jump: zero spectral gap");
  for (;;) {
    Vec q = Vec::zero(d);
    for (int i = 0; i < d; ++i) q[i] = sigma * rng.gaussian();
    if (model.rhat(q) == 0.0) continue;  // beyond the cutoff ball
    const Vec p = xi_from + q;
    const double omega = 0.5 * (p.norm2() - xi_from.norm2());
    const double g = model.gap(q);
    const double accept = gamma0 * g / (omega * omega + g * g);
    if (rng.uniform() < accept) return p;
  }
}

double KineticState::grid_mass() const {
  double acc = 0.0;
  for (double w : what) acc += w;
  return acc * grid.delta();
}

KineticOperator::KineticOperator(const SpectralModel& model,
                                 const KineticGrid& grid)
    : grid_(grid) {
  model.ensure_valid();
  if (model.dim() != 1)
    throw ConfigError("KineticOperator: the grid solver is 1-d");
  if (grid.n_cells < 2 || grid.xi_max <= 0)
    throw ConfigError("KineticOperator: bad grid");

  const int n = grid.n_cells;
  kernel_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                 0.0);
  // Exact symmetry: fill i <= j and mirror.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double k = collision_kernel(model, Vec(grid.center(j)),
                                        Vec(grid.center(i)));
      kernel_[static_cast<std::size_t>(i) * n + j] = k;
      kernel_[static_cast<std::size_t>(j) * n + i] = k;
    }
  }
  row_rate_.assign(static_cast<std::size_t>(n), 0.0);
  const double dxi = grid.delta();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += kernel_[static_cast<std::size_t>(i) * n + j];
    row_rate_[static_cast<std::size_t>(i)] = acc * dxi;
  }
  atom_gain_.resize(static_cast<std::size_t>(n));
  double atom_acc = 0.0;
  for (int i = 0; i < n; ++i) {
    atom_gain_[static_cast<std::size_t>(i)] =
        collision_kernel(model, Vec(grid.center(i)), Vec(0.0));
    atom_acc += atom_gain_[static_cast<std::size_t>(i)];
  }
  atom_rate_ = atom_acc * dxi;
  max_rate_ = *std::max_element(row_rate_.begin(), row_rate_.end());
  max_rate_ = std::max(max_rate_, atom_rate_);
}

void KineticOperator::evolve(KineticState& state, double dt,
                             int n_steps) const {
  if (state.grid.n_cells != grid_.n_cells ||
      state.grid.xi_max != grid_.xi_max)
    throw ConfigError("evolve: state grid does not match operator grid");
  if (dt <= 0 || n_steps < 0)
    throw std::invalid_argument("evolve: bad step parameters");
  if (dt * max_rate_ > 0.9) {
    std::ostringstream msg;
    msg << "evolve: CFL violated, dt*max_rate = " << dt * max_rate_
        << " > 0.9";
    throw NumericalError(msg.str());
  }

  const int n = grid_.n_cells;
  const double dxi = grid_.delta();
  std::vector<double> next(static_cast<std::size_t>(n));
  const double atom_decay = std::exp(-atom_rate_ * dt);

  for (int step = 0; step < n_steps; ++step) {
    // Grid-grid exchange, explicit Euler with the symmetric kernel.
    for (int i = 0; i < n; ++i) {
      const double* row = &kernel_[static_cast<std::size_t>(i) * n];
      double gain = 0.0;
      for (int j = 0; j < n; ++j) gain += row[j] * state.what[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] =
          state.what[static_cast<std::size_t>(i)] +
          dt * (gain * dxi -
                row_rate_[static_cast<std::size_t>(i)] *
                    state.what[static_cast<std::size_t>(i)]);
    }
    // The atom decays by its closed-form exponential; the released mass is
    // deposited with the discrete kernel profile so the exchange conserves
    // mass exactly.
    const double released = state.delta_weight * (1.0 - atom_decay);
    if (atom_rate_ > 0.0) {
      const double norm = released / (atom_rate_ / dxi);
      for (int i = 0; i < n; ++i)
        next[static_cast<std::size_t>(i)] +=
            atom_gain_[static_cast<std::size_t>(i)] * norm / dxi;
    }
    state.delta_weight *= atom_decay;
    state.what.swap(next);
    state.time += dt;
  }
}

SeriesResult scattering_series(const SpectralModel& model,
                               const InitialProfile& profile, double t,
                               const Vec& xi, int k_max, int n_mc,
                               const ScatteringRate& rate, std::uint64_t seed,
                               std::uint64_t salt, int workers) {
  model.ensure_valid();
  if (k_max < 1) throw ConfigError("scattering_series: k_max must be >= 1");
  if (t < 0) throw std::invalid_argument("scattering_series: t < 0");

  SeriesResult out;
  const double mass = profile.l2norm_sq();
  const int d = model.dim();

  if (t == 0.0 || model.is_null()) {
    for (int k = 1; k <= k_max; ++k) out.orders.push_back({k, 0.0, 0.0});
    return out;
  }

  // Accumulation is grouped into fixed-size blocks so the reduction order
  // (and therefore the output bytes) does not depend on the worker count.
  constexpr int kBlock = 1024;
  for (int k = 1; k <= k_max; ++k) {
    const int n_blocks = (n_mc + kBlock - 1) / kBlock;
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> block_sum2(static_cast<std::size_t>(n_blocks), 0.0);

    parallel_for(static_cast<std::size_t>(n_blocks), workers, [&](std::size_t b) {
      double local = 0.0, local2 = 0.0;
      const int lo = static_cast<int>(b) * kBlock;
      const int hi = std::min(n_mc, lo + kBlock);
      std::vector<double> times(static_cast<std::size_t>(k));
      for (int s = lo; s < hi; ++s) {
        RngStream rng(seed, StreamKind::series,
                      salt ^ (static_cast<std::uint64_t>(k) << 48),
                      static_cast<std::uint64_t>(s));
        // Uniform draw from the descending time simplex.
        for (int i = 0; i < k; ++i) times[static_cast<std::size_t>(i)] = t * rng.uniform();
        std::sort(times.begin(), times.end(), std::greater<double>());

        // Momentum chain from xi down to 0; the last factor is pinned.
        double weight = 1.0;
        Vec eta = xi;
        double prev_time = t;
        for (int j = 0; j < k; ++j) {
          const double vj = times[static_cast<std::size_t>(j)];
          weight *= std::exp(-(prev_time - vj) * rate.at(eta));
          prev_time = vj;
          if (j < k - 1) {
            weight *= rate.at(eta);
            eta = sample_post_jump(model, rng, eta);
          }
        }
        weight *= std::exp(-prev_time * rate(0.0));
        weight *= collision_kernel(model, Vec::zero(d), eta);
        // Simplex volume t^k / k!.
        double volume = 1.0;
        for (int i = 1; i <= k; ++i) volume *= t / i;
        weight *= volume * mass;

        local += weight;
        local2 += weight * weight;
      }
      block_sum[b] = local;
      block_sum2[b] = local2;
    });

    double sum = 0.0, sum2 = 0.0;
    for (int b = 0; b < n_blocks; ++b) {
      sum += block_sum[static_cast<std::size_t>(b)];
      sum2 += block_sum2[static_cast<std::size_t>(b)];
    }
    const double mean = sum / n_mc;
    const double var =
        std::max(0.0, (sum2 / n_mc - mean * mean) / std::max(1, n_mc - 1));
    out.orders.push_back({k, mean, std::sqrt(var)});
    out.estimate += mean;
    out.stderr_ = std::hypot(out.stderr_, std::sqrt(var));
  }

  // Envelope bound on the dropped tail: each order is at most
  // mass * kernel_sup * (t dbar)^k / k! / dbar.
  const double tdbar = t * rate.dbar();
  double term = 1.0;
  double partial = 1.0;  // sum_{k=0}^{k_max} (t dbar)^k / k!
  for (int k = 1; k <= k_max; ++k) {
    term *= tdbar / k;
    partial += term;
  }
  const double tail = std::exp(tdbar) - partial;
  out.truncation_bound =
      mass * (rate.dbar() > 0 ? rate.kernel_sup() / rate.dbar() : 0.0) *
      std::max(0.0, tail);
  return out;
}

ParticleCloud transport_particles(const SpectralModel& model,
                                  const InitialProfile& profile, double t,
                                  int n_particles, const ScatteringRate& rate,
                                  std::uint64_t seed, std::uint64_t salt,
                                  int workers) {
  model.ensure_valid();
  if (n_particles < 1)
    throw ConfigError("transport_particles: need >= 1 particle");
  if (t < 0) throw std::invalid_argument("transport_particles: t < 0");

  const int d = model.dim();
  ParticleCloud cloud;
  cloud.time = t;
  cloud.particles.resize(static_cast<std::size_t>(n_particles));
  const double weight = profile.l2norm_sq() / n_particles;

  parallel_for(static_cast<std::size_t>(n_particles), workers, [&](std::size_t i) {
    RngStream rng(seed, StreamKind::particle, salt, i);
    Particle p;
    p.x = Vec::zero(d);
    p.xi = Vec::zero(d);
    p.weight = weight;
    p.n_jumps = 0;
    double now = 0.0;
    for (;;) {
      const double r = rate.at(p.xi);
      const double hold = r > 0.0 ? rng.exponential() / r
                                  : std::numeric_limits<double>::infinity();
      if (now + hold >= t) {
        p.x = p.x + (t - now) * p.xi;
        break;
      }
      now += hold;
      p.x = p.x + hold * p.xi;
      p.xi = sample_post_jump(model, rng, p.xi);
      ++p.n_jumps;
    }
    cloud.particles[i] = p;
  });
  return cloud;
}

std::pair<double, double> momentum_cell_mass(const ParticleCloud& cloud,
                                             double lo, double hi,
                                             bool scattering_only) {
  double mass = 0.0;
  double mass_sq = 0.0;
  for (const auto& p : cloud.particles) {
    if (scattering_only && p.n_jumps == 0) continue;
    const double v = p.xi[0];
    if (v >= lo && v < hi) {
      mass += p.weight;
      mass_sq += p.weight * p.weight;
    }
  }
  // Binomial-style error for equal weights.
  return {mass, std::sqrt(mass_sq)};
}

std::complex<double> corrector_pseudovariance(const SpectralModel& model,
                                              const InitialProfile& profile,
                                              double t, const Vec& xi,
                                              double alpha, double tol) {
  if (alpha <= 0)
    throw ConfigError("corrector_pseudovariance: alpha must be > 0");
  if (t < 0) throw std::invalid_argument("corrector_pseudovariance: t < 0");
  if (alpha < 1.0) return {0.0, 0.0};
  if (t == 0.0 || model.is_null()) return {0.0, 0.0};

  const int d = model.dim();
  const std::complex<double> d00 = d_density(model, Vec::zero(d), Vec::zero(d));
  const std::complex<double> d0 = d_zero(model, tol).value;
  const std::complex<double> envelope = -d00 * std::exp(-d0 * t);

  const double c = profile.support_radius() + std::sqrt(xi.norm2());
  double lo[3], hi[3];
  for (int i = 0; i < d; ++i) {
    lo[i] = -c;
    hi[i] = c;
  }
  quad::Options opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * 1e-2;

  auto pair_profile = [&](const double* q) {
    Vec p = Vec::zero(d);
    for (int i = 0; i < d; ++i) p[i] = q[i];
    return profile.phi0hat(xi - p) * profile.phi0hat(xi + p);
  };

  quad::Result<std::complex<double>> res;
  if (alpha > 1.0) {
    res = quad::integrate_box(
        std::function<std::complex<double>(const double*)>(pair_profile),
        std::span<const double>(lo, static_cast<std::size_t>(d)),
        std::span<const double>(hi, static_cast<std::size_t>(d)), opt);
    if (!res.converged)
      throw NumericalError("corrector_pseudovariance: quadrature failed");
    return envelope * t * res.value;
  }

  // alpha == 1: inner time integral of e^{-i |p|^2 v} over [0, t] in closed
  // form, t e^{-i z t / 2} sinc(z t / 2) with z = |p|^2.
  auto sinc = [](double w) {
    if (std::abs(w) < 1e-4) return 1.0 - w * w / 6.0 + w * w * w * w / 120.0;
    return std::sin(w) / w;
  };
  res = quad::integrate_box(
      std::function<std::complex<double>(const double*)>(
          [&](const double* q) {
            Vec p = Vec::zero(d);
            for (int i = 0; i < d; ++i) p[i] = q[i];
            const double z = p.norm2();
            const double w = 0.5 * z * t;
            const std::complex<double> time_factor =
                t * std::complex<double>(std::cos(w), -std::sin(w)) * sinc(w);
            return profile.phi0hat(xi - p) * profile.phi0hat(xi + p) *
                   time_factor;
          }),
      std::span<const double>(lo, static_cast<std::size_t>(d)),
      std::span<const double>(hi, static_cast<std::size_t>(d)), opt);
  if (!res.converged)
    throw NumericalError("corrector_pseudovariance: quadrature failed");
  return envelope * res.value;
}

}  // namespace rswave
