#include "rswave/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace rswave {
namespace {
// FFTW plan creation/destruction is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Impl {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t size = 0;
};

Fft::Fft(const FieldGrid& grid) : grid_(grid), impl_(new Impl) {
  impl_->size = grid.size();
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->buf = fftw_alloc_complex(impl_->size);
  // FFTW_ESTIMATE picks plans deterministically, which keeps outputs
  // byte-identical across reruns.
  const int n = grid.n;
  switch (grid.dim) {
    case 1:
      impl_->fwd = fftw_plan_dft_1d(n, impl_->buf, impl_->buf, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
      impl_->bwd = fftw_plan_dft_1d(n, impl_->buf, impl_->buf, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
      break;
    case 2:
      impl_->fwd = fftw_plan_dft_2d(n, n, impl_->buf, impl_->buf, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
      impl_->bwd = fftw_plan_dft_2d(n, n, impl_->buf, impl_->buf,
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
      break;
    default:
      impl_->fwd = fftw_plan_dft_3d(n, n, n, impl_->buf, impl_->buf,
                                    FFTW_FORWARD, FFTW_ESTIMATE);
      impl_->bwd = fftw_plan_dft_3d(n, n, n, impl_->buf, impl_->buf,
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
      break;
  }
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
  if (impl_->buf) fftw_free(impl_->buf);
}

void Fft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
  std::memcpy(impl_->buf, in.data(), impl_->size * sizeof(fftw_complex));
  fftw_execute(impl_->fwd);
  std::memcpy(out.data(), impl_->buf, impl_->size * sizeof(fftw_complex));
}

void Fft::backward(std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) {
  std::memcpy(impl_->buf, in.data(), impl_->size * sizeof(fftw_complex));
  fftw_execute(impl_->bwd);
  std::memcpy(out.data(), impl_->buf, impl_->size * sizeof(fftw_complex));
}

}  // namespace rswave
