#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rswave/errors.hpp"
#include "rswave/vec.hpp"

namespace rswave {

/// Periodic frequency/space grid: n points per dimension (power of two),
/// physical box length L, wavevectors 2 pi k / L with k in [-n/2, n/2).
/// FFT index i maps to k = i for i < n/2 and k = i - n otherwise.
struct FieldGrid {
  int dim = 1;
  int n = 0;
  double L = 0.0;

  FieldGrid() = default;
  FieldGrid(int dim_, int n_, double L_) : dim(dim_), n(n_), L(L_) {
    if (dim < 1 || dim > 3) throw ConfigError("grid: dim must be 1..3");
    if (n < 2 || (n & (n - 1)) != 0)
      throw ConfigError("grid: n must be a power of two >= 2");
    if (L <= 0) throw ConfigError("grid: L must be > 0");
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(n);
    return s;
  }

  double dx() const { return L / n; }
  double dxi() const { return 6.283185307179586476925287 / L; }

  std::array<int, 3> indices(std::size_t flat) const {
    std::array<int, 3> out{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      out[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(n));
      flat /= static_cast<std::size_t>(n);
    }
    return out;
  }

  std::size_t flat(const std::array<int, 3>& idx) const {
    std::size_t out = 0;
    for (int i = dim - 1; i >= 0; --i) {
      out = out * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
    }
    return out;
  }

  /// Signed mode number along one axis for FFT index i.
  int mode(int i) const { return i < n / 2 ? i : i - n; }

  /// FFT index for a signed mode number in [-n/2, n/2).
  int index_of_mode(int k) const {
    if (k < -n / 2 || k >= n / 2) throw ConfigError("grid: mode out of range");
    return k >= 0 ? k : k + n;
  }

  Vec wavevector(std::size_t flat_idx) const {
    const auto idx = indices(flat_idx);
    Vec xi = Vec::zero(dim);
    const double base = dxi();
    for (int i = 0; i < dim; ++i)
      xi[static_cast<std::size_t>(i)] = base * mode(idx[static_cast<std::size_t>(i)]);
    return xi;
  }

  /// Index of the Hermitian partner (negation mod n per dimension).
  std::size_t conjugate_index(std::size_t flat_idx) const {
    auto idx = indices(flat_idx);
    for (int i = 0; i < dim; ++i) {
      auto& v = idx[static_cast<std::size_t>(i)];
      v = v == 0 ? 0 : n - v;
    }
    return flat(idx);
  }

  /// Flat index whose wavevector equals xi (grid multiples), or throws when
  /// xi is off-grid by more than a relative 1e-9.
  std::size_t index_for_wavevector(const Vec& xi) const;
};

inline std::size_t FieldGrid::index_for_wavevector(const Vec& xi) const {
  std::array<int, 3> idx{0, 0, 0};
  const double base = dxi();
  for (int i = 0; i < dim; ++i) {
    const double m = xi[static_cast<std::size_t>(i)] / base;
    const double r = m < 0 ? m - 0.5 : m + 0.5;
    const int k = static_cast<int>(r);
    if (std::abs(m - k) > 1e-9 * (1.0 + std::abs(m)))
      throw ConfigError("probe frequency is not a grid wavevector");
    idx[static_cast<std::size_t>(i)] = index_of_mode(k);
  }
  return flat(idx);
}

}  // namespace rswave
