#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rswave {

/// splitmix64 finalizer; used for seeding and stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Purpose tags keep independent random streams from colliding when they are
/// all derived from one master seed.
enum class StreamKind : std::uint64_t {
  field = 1,
  series = 2,
  particle = 3,
  synthetic = 4,
  probe = 5,
};

/// xoshiro256++ with explicitly coded uniform/normal/exponential transforms.
/// Results are bit-reproducible for a given (master seed, kind, a, b) across
/// platforms and worker counts, which the reproducibility contract requires;
/// the standard <random> distributions are implementation defined.
class RngStream {
 public:
  RngStream() : RngStream(0, StreamKind::synthetic, 0, 0) {}

  RngStream(std::uint64_t master_seed, StreamKind kind, std::uint64_t a = 0,
            std::uint64_t b = 0) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(kind)));
    h = mix64(h ^ mix64(a));
    h = mix64(h ^ mix64(b));
    for (auto& w : state_) {
      h += 0x9e3779b97f4a7c15ULL;
      w = mix64(h);
    }
    have_spare_ = false;
    spare_ = 0.0;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller, spare value cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 6.283185307179586476925287 * uniform();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Standard complex Gaussian: E z = 0, E|z|^2 = 1, E z^2 = 0.
  std::complex<double> gaussian_complex() {
    const double s = 0.7071067811865475244;  // 1/sqrt(2)
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

  /// Exponential with unit mean.
  double exponential() { return -std::log(uniform_pos()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  bool have_spare_;
  double spare_;
};

}  // namespace rswave
