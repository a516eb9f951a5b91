#pragma once

#include <complex>
#include <memory>
#include <span>

#include "rswave/grid.hpp"

namespace rswave {

/// Unnormalized complex DFT on a FieldGrid (any worker owns its own
/// instance; plan creation is serialized internally).
///   forward:  X_k = sum_j x_j exp(-2 pi i j.k / n)
///   backward: x_j = sum_k X_k exp(+2 pi i j.k / n)
class Fft {
 public:
  explicit Fft(const FieldGrid& grid);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);
  void backward(std::span<const std::complex<double>> in,
                std::span<std::complex<double>> out);

  const FieldGrid& grid() const { return grid_; }

 private:
  struct Impl;
  FieldGrid grid_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rswave
