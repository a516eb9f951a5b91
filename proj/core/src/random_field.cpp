#include "rswave/random_field.hpp"

#include <cmath>
#include <stdexcept>

#include "rswave/errors.hpp"

namespace rswave {

std::shared_ptr<const ModeTable> make_mode_table(const SpectralModel& model,
                                                 const FieldGrid& grid) {
  if (model.dim() != grid.dim)
    throw ConfigError("mode table: model and grid dimension mismatch");
  model.ensure_valid();

  auto table = std::make_shared<ModeTable>();
  table->grid = grid;
  const std::size_t total = grid.size();
  table->stat_var.assign(total, 0.0);
  table->decay.assign(total, 0.0);

  const double cell = std::pow(1.0 / grid.L, grid.dim);
  table->conj_index.resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    const Vec xi = grid.wavevector(k);
    table->decay[k] = model.gap(xi);
    table->stat_var[k] = model.rhat(xi) * cell;
    table->conj_index[k] = static_cast<std::uint32_t>(grid.conjugate_index(k));
  }
  for (std::size_t k = 0; k < total; ++k) {
    if (table->stat_var[k] <= 0.0) continue;
    const std::size_t c = grid.conjugate_index(k);
    if (c == k) {
      table->self_conjugate.push_back(static_cast<std::uint32_t>(k));
    } else if (k < c) {
      table->pairs.emplace_back(static_cast<std::uint32_t>(k),
                                static_cast<std::uint32_t>(c));
    }
  }
  return table;
}

FieldState::FieldState(std::shared_ptr<const ModeTable> table, RngStream rng)
    : table_(std::move(table)), rng_(rng) {
  modes_.assign(table_->grid.size(), {0.0, 0.0});
  // Stationary draw.
  for (const auto& [k, c] : table_->pairs) {
    const double sd = std::sqrt(table_->stat_var[k]);
    const std::complex<double> z = sd * rng_.gaussian_complex();
    modes_[k] = z;
    modes_[c] = std::conj(z);
  }
  for (const auto k : table_->self_conjugate) {
    modes_[k] = std::sqrt(table_->stat_var[k]) * rng_.gaussian();
  }
}

void FieldState::refresh_coefficients(double dt) {
  coef_decay_.resize(table_->pairs.size());
  coef_noise_.resize(table_->pairs.size());
  coef_decay_self_.resize(table_->self_conjugate.size());
  coef_noise_self_.resize(table_->self_conjugate.size());
  for (std::size_t i = 0; i < table_->pairs.size(); ++i) {
    const auto k = table_->pairs[i].first;
    const double a = std::exp(-table_->decay[k] * dt);
    coef_decay_[i] = a;
    coef_noise_[i] = std::sqrt(table_->stat_var[k] * (1.0 - a * a));
  }
  for (std::size_t i = 0; i < table_->self_conjugate.size(); ++i) {
    const auto k = table_->self_conjugate[i];
    const double a = std::exp(-table_->decay[k] * dt);
    coef_decay_self_[i] = a;
    coef_noise_self_[i] = std::sqrt(table_->stat_var[k] * (1.0 - a * a));
  }
  cached_dt_ = dt;
}

void FieldState::advance(double dt) {
  if (dt < 0) throw std::invalid_argument("FieldState::advance: dt < 0");
  if (dt != cached_dt_) refresh_coefficients(dt);
  for (std::size_t i = 0; i < table_->pairs.size(); ++i) {
    const auto [k, c] = table_->pairs[i];
    const std::complex<double> z =
        coef_decay_[i] * modes_[k] + coef_noise_[i] * rng_.gaussian_complex();
    modes_[k] = z;
    modes_[c] = std::conj(z);
  }
  for (std::size_t i = 0; i < table_->self_conjugate.size(); ++i) {
    const auto k = table_->self_conjugate[i];
    modes_[k] = coef_decay_self_[i] * modes_[k] +
                coef_noise_self_[i] * rng_.gaussian();
  }
  time_ += dt;
}

std::vector<double> FieldState::realize(Fft& fft) const {
  std::vector<double> values(modes_.size());
  realize(fft, values);
  return values;
}

void FieldState::realize(Fft& fft, std::span<double> out) const {
  const std::size_t total = modes_.size();
  double max_mode = 0.0;
  double max_asym = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    max_mode = std::max(max_mode, std::norm(modes_[k]));
    const std::size_t c = table_->conj_index[k];
    max_asym = std::max(max_asym, std::norm(modes_[k] - std::conj(modes_[c])));
  }
  if (max_asym > 1e-24 * std::max(max_mode, 1e-300) && max_mode > 0.0)
    throw NumericalError("realize: Hermitian symmetry violated");

  // The transform reuses `out`'s storage through a complex scratch pass.
  thread_local std::vector<std::complex<double>> scratch;
  scratch.resize(total);
  fft.backward(modes_, scratch);
  for (std::size_t j = 0; j < total; ++j) out[j] = scratch[j].real();
}

void FieldState::set_mode_pair(std::size_t k, std::complex<double> value) {
  const std::size_t c = table_->grid.conjugate_index(k);
  modes_[k] = value;
  modes_[c] = std::conj(value);
  if (c == k) modes_[k] = value.real();
}

FieldState sample_stationary(const SpectralModel& model, const FieldGrid& grid,
                             RngStream rng) {
  return FieldState(make_mode_table(model, grid), rng);
}

FieldState sample_stationary(std::shared_ptr<const ModeTable> table,
                             RngStream rng) {
  return FieldState(std::move(table), rng);
}

std::pair<double, double> empirical_covariance(
    std::span<const FieldTrajectory> paths, double lag,
    const std::array<int, 3>& shift_cells, const FieldGrid& grid) {
  if (paths.size() < 2)
    throw std::invalid_argument("empirical_covariance: need >= 2 paths");

  const std::size_t total = grid.size();
  std::vector<double> per_path;
  per_path.reserve(paths.size());
  for (const auto& path : paths) {
    double acc = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < path.size(); ++a) {
      for (std::size_t b = a; b < path.size(); ++b) {
        if (std::abs(path[b].time - path[a].time - lag) > 1e-9) continue;
        // space average over the periodic grid with the requested shift
        double space = 0.0;
        for (std::size_t j = 0; j < total; ++j) {
          auto idx = grid.indices(j);
          for (int i = 0; i < grid.dim; ++i) {
            auto& v = idx[static_cast<std::size_t>(i)];
            v = (v + (shift_cells[static_cast<std::size_t>(i)] % grid.n + grid.n)) % grid.n;
          }
          space += path[a].values[j] * path[b].values[grid.flat(idx)];
        }
        acc += space / static_cast<double>(total);
        ++pairs;
      }
    }
    if (pairs == 0)
      throw std::invalid_argument(
          "empirical_covariance: no snapshot pair at the requested lag");
    per_path.push_back(acc / static_cast<double>(pairs));
  }

  double mean = 0.0;
  for (double v : per_path) mean += v;
  mean /= static_cast<double>(per_path.size());
  double var = 0.0;
  for (double v : per_path) var += (v - mean) * (v - mean);
  var /= static_cast<double>(per_path.size() - 1);
  const double stderr_ = std::sqrt(var / static_cast<double>(per_path.size()));
  return {mean, stderr_};
}

}  // namespace rswave
