#include "rswave/wave_solver.hpp"

#include <cmath>

#include "rswave/errors.hpp"

namespace rswave {
namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

WaveState::WaveState(FieldGrid grid, WaveParams params)
    : grid_(grid), params_(params) {
  chi_.assign(grid_.size(), {0.0, 0.0});
  xi_norm2_.resize(grid_.size());
  for (std::size_t k = 0; k < xi_norm2_.size(); ++k)
    xi_norm2_[k] = grid_.wavevector(k).norm2();
}

double WaveState::mass() const {
  double acc = 0.0;
  for (const auto& c : chi_) acc += std::norm(c);
  return acc * std::pow(params_.kappa / grid_.L, grid_.dim);
}

WaveState init_low_freq(const InitialProfile& profile, WaveParams params,
                        const FieldGrid& grid, double width_factor) {
  if (params.kappa <= 0) throw ConfigError("init_low_freq: kappa must be > 0");
  if (grid.L * params.kappa < width_factor)
    throw ConfigError("init_low_freq: box too small (L*kappa < width factor)");
  if (profile.dim() != grid.dim)
    throw ConfigError("init_low_freq: profile/grid dimension mismatch");

  WaveState state(grid, params);
  const double scale = std::pow(params.kappa, -grid.dim);
  auto chi = state.chi_mut();
  for (std::size_t k = 0; k < chi.size(); ++k) {
    const Vec xi = grid.wavevector(k);
    chi[k] = scale * profile.phi0hat((1.0 / params.kappa) * xi);
  }
  return state;
}

WaveStepper::WaveStepper(const FieldGrid& grid) : fft_(grid) {
  buf_.resize(grid.size());
  buf2_.resize(grid.size());
  vreal_.resize(grid.size());
}

void WaveStepper::step(WaveState& state, FieldState& field, double dt) {
  if (dt <= 0) throw std::invalid_argument("step: dt must be > 0");
  const double s_mid = state.micro_time() + 0.5 * dt;

  field.advance(0.5 * dt);
  if (!field.is_null()) {
    const auto& grid = state.grid();
    const std::size_t total = grid.size();
    const double eps = state.params().eps;
    auto chi = state.chi_mut();
    const auto xi2 = state.xi_norm2();

    // Interaction picture -> physical space at the midpoint.
    for (std::size_t k = 0; k < total; ++k) {
      const double theta = 0.5 * xi2[k] * s_mid;
      const std::complex<double> e_conj(std::cos(theta), -std::sin(theta));
      buf_[k] = chi[k] * e_conj;
    }
    fft_.backward(buf_, buf2_);

    // exp(-i eps V dt), V read at the Strang midpoint.
    field.realize(fft_, vreal_);
    for (std::size_t j = 0; j < total; ++j) {
      const double phase = -eps * vreal_[j] * dt;
      buf2_[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }

    fft_.forward(buf2_, buf_);
    const double inv_n = 1.0 / static_cast<double>(total);
    for (std::size_t k = 0; k < total; ++k) {
      const double theta = 0.5 * xi2[k] * s_mid;
      const std::complex<double> e(std::cos(theta), std::sin(theta));
      chi[k] = buf_[k] * e * inv_n;
    }
  }
  field.advance(0.5 * dt);
  state.set_micro_time(state.micro_time() + dt);
}

double WaveStepper::energy(const WaveState& state, const FieldState& field,
                           double eps) {
  const auto& grid = state.grid();
  const std::size_t total = grid.size();
  const auto chi = state.chi();
  const auto xi2 = state.xi_norm2();
  const double cell_xi = std::pow(1.0 / grid.L, grid.dim);

  double kinetic = 0.0;
  for (std::size_t k = 0; k < total; ++k) kinetic += xi2[k] * std::norm(chi[k]);
  kinetic *= cell_xi;

  // |phi(x)|^2 needs the physical-space field at the current time.
  const double s = state.micro_time();
  for (std::size_t k = 0; k < total; ++k) {
    const double theta = 0.5 * xi2[k] * s;
    buf_[k] = chi[k] * std::complex<double>(std::cos(theta), -std::sin(theta));
  }
  fft_.backward(buf_, buf2_);
  field.realize(fft_, vreal_);
  const double inv_Ld = std::pow(1.0 / grid.L, grid.dim);
  const double cell_x = std::pow(grid.dx(), grid.dim);
  double potential = 0.0;
  for (std::size_t j = 0; j < total; ++j) {
    // backward() carries a factor L^d relative to phi(x).
    potential += vreal_[j] * std::norm(buf2_[j] * inv_Ld);
  }
  potential *= eps * cell_x;

  return std::pow(state.params().kappa, grid.dim) * (kinetic + potential);
}

double WaveStepper::tail_mass_fraction(const WaveState& state) const {
  const auto& grid = state.grid();
  const auto chi = state.chi();
  const double xi_max = grid.dxi() * (grid.n / 2);
  const double threshold = 0.9 * xi_max;
  double tail = 0.0, total = 0.0;
  for (std::size_t k = 0; k < chi.size(); ++k) {
    const double m = std::norm(chi[k]);
    total += m;
    if (std::sqrt(state.xi_norm2()[k]) >= threshold) tail += m;
  }
  return total == 0.0 ? 0.0 : tail / total;
}

std::vector<std::complex<double>> compensate_low(
    const WaveState& state, std::span<const std::size_t> probes) {
  const double scale = std::pow(state.params().kappa, state.grid().dim);
  std::vector<std::complex<double>> out;
  out.reserve(probes.size());
  for (const auto k : probes) out.push_back(scale * state.chi()[k]);
  return out;
}

std::vector<std::complex<double>> compensate_high(
    const WaveState& state, std::span<const std::size_t> probes) {
  const double scale =
      std::pow(state.params().kappa, 0.5 * state.grid().dim);
  std::vector<std::complex<double>> out;
  out.reserve(probes.size());
  for (const auto k : probes) out.push_back(scale * state.chi()[k]);
  return out;
}

std::vector<std::complex<double>> fluctuation(
    std::span<const std::complex<double>> psi_samples, double kappa, int dim) {
  if (psi_samples.size() < 2)
    throw std::invalid_argument("fluctuation: need an ensemble of >= 2");
  std::complex<double> mean{0.0, 0.0};
  for (const auto& z : psi_samples) mean += z;
  mean /= static_cast<double>(psi_samples.size());
  const double scale = std::pow(kappa, -0.5 * dim);
  std::vector<std::complex<double>> out;
  out.reserve(psi_samples.size());
  for (const auto& z : psi_samples) out.push_back(scale * (z - mean));
  return out;
}

std::complex<double> wigner_pairing(std::span<const std::complex<double>> u,
                                    int window, int dim, double dxi_psi,
                                    double eps, double beta,
                                    const WignerTest& test) {
  const int side = 2 * window + 1;
  std::size_t expect = 1;
  for (int i = 0; i < dim; ++i) expect *= static_cast<std::size_t>(side);
  if (u.size() != expect)
    throw std::invalid_argument("wigner_pairing: window size mismatch");

  const double eps_beta = std::pow(eps, beta);
  const double deta = 2.0 * dxi_psi / eps_beta;
  const int j_cut = std::min(
      window, static_cast<int>(std::floor(test.eta_cut / deta)));
  const int m_cut = std::min(
      window, static_cast<int>(std::floor(test.xi_cut / dxi_psi)));

  auto at = [&](const std::array<int, 3>& m) {
    std::size_t idx = 0;
    for (int i = dim - 1; i >= 0; --i)
      idx = idx * static_cast<std::size_t>(side) +
            static_cast<std::size_t>(m[static_cast<std::size_t>(i)] + window);
    return u[idx];
  };

  // Iterate centers m and offsets j over the lattice; both m+j and m-j must
  // stay inside the window.
  std::array<int, 3> m{0, 0, 0}, j{0, 0, 0};
  std::complex<double> acc{0.0, 0.0};

  std::function<void(int)> loop_j = [&](int axis) {
    if (axis == dim) {
      std::array<int, 3> mp{0, 0, 0}, mm{0, 0, 0};
      for (int i = 0; i < dim; ++i) {
        mp[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] + j[static_cast<std::size_t>(i)];
        mm[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] - j[static_cast<std::size_t>(i)];
        if (std::abs(mp[static_cast<std::size_t>(i)]) > window ||
            std::abs(mm[static_cast<std::size_t>(i)]) > window)
          return;
      }
      Vec xi = Vec::zero(dim), eta = Vec::zero(dim);
      for (int i = 0; i < dim; ++i) {
        xi[static_cast<std::size_t>(i)] = dxi_psi * m[static_cast<std::size_t>(i)];
        eta[static_cast<std::size_t>(i)] = deta * j[static_cast<std::size_t>(i)];
      }
      acc += at(mp) * std::conj(at(mm)) * std::conj(test.ghat(eta)) *
             std::conj(test.h(xi));
      return;
    }
    for (int v = -j_cut; v <= j_cut; ++v) {
      j[static_cast<std::size_t>(axis)] = v;
      loop_j(axis + 1);
    }
  };
  std::function<void(int)> loop_m = [&](int axis) {
    if (axis == dim) {
      loop_j(0);
      return;
    }
    for (int v = -m_cut; v <= m_cut; ++v) {
      m[static_cast<std::size_t>(axis)] = v;
      loop_m(axis + 1);
    }
  };
  loop_m(0);

  const double measure =
      std::pow(dxi_psi * deta / kTwoPi, dim);
  return acc * measure;
}

}  // namespace rswave
