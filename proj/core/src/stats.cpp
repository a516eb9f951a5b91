#include "rswave/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rswave {
namespace {

// Standard error of block means around `center`.
double block_se(const std::vector<double>& blocks, double center) {
  const std::size_t nb = blocks.size();
  if (nb < 2) return 0.0;
  double acc = 0.0;
  for (double b : blocks) acc += (b - center) * (b - center);
  return std::sqrt(acc / (static_cast<double>(nb) * (nb - 1)));
}

}  // namespace

MomentStats compute_moment_stats(std::span<const std::complex<double>> samples,
                                 std::size_t block) {
  MomentStats out;
  out.n = samples.size();
  if (out.n < 2)
    throw std::invalid_argument("compute_moment_stats: need >= 2 samples");
  if (block < 2) block = 2;

  std::complex<double> sum{0.0, 0.0};
  for (const auto& z : samples) sum += z;
  out.mean = sum / static_cast<double>(out.n);

  // Global centered moments.
  double m2 = 0.0, m4 = 0.0;
  std::complex<double> p2{0.0, 0.0};
  for (const auto& z : samples) {
    const std::complex<double> d = z - out.mean;
    const double a2 = std::norm(d);
    m2 += a2;
    m4 += a2 * a2;
    p2 += d * d;
  }
  out.var_conj = m2 / static_cast<double>(out.n);
  out.fourth_abs = m4 / static_cast<double>(out.n);
  out.second_nonconj = p2 / static_cast<double>(out.n);

  // Batch means.
  const std::size_t nb = (out.n + block - 1) / block;
  std::vector<double> b_re, b_im, b_m2, b_m4, b_p2;
  b_re.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(out.n, lo + block);
    std::complex<double> s{0.0, 0.0}, sp{0.0, 0.0};
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::complex<double> d = samples[i] - out.mean;
      s += samples[i];
      const double a2 = std::norm(d);
      s2 += a2;
      s4 += a2 * a2;
      sp += d * d;
    }
    const double cnt = static_cast<double>(hi - lo);
    b_re.push_back(s.real() / cnt);
    b_im.push_back(s.imag() / cnt);
    b_m2.push_back(s2 / cnt);
    b_m4.push_back(s4 / cnt);
    b_p2.push_back(std::abs(sp / cnt - out.second_nonconj));
  }
  const double se_re = block_se(b_re, out.mean.real());
  const double se_im = block_se(b_im, out.mean.imag());
  out.se_mean = std::hypot(se_re, se_im);
  out.se_var_conj = block_se(b_m2, out.var_conj);
  out.se_fourth_abs = block_se(b_m4, out.fourth_abs);
  out.se_second_nonconj = block_se(b_p2, 0.0);

  if (out.var_conj > 0.0) {
    out.kurtosis_ratio = out.fourth_abs / (out.var_conj * out.var_conj);
    // Delta method on ratio = m4 / m2^2.
    const double dm4 = out.se_fourth_abs / (out.var_conj * out.var_conj);
    const double dm2 =
        2.0 * out.fourth_abs / (out.var_conj * out.var_conj * out.var_conj) *
        out.se_var_conj;
    out.se_kurtosis_ratio = std::hypot(dm4, dm2);
  }
  return out;
}

GaussianityReport gaussianity_diagnostics(
    std::span<const std::complex<double>> samples, std::size_t block) {
  if (samples.size() < 100)
    throw std::invalid_argument("gaussianity_diagnostics: need >= 100 samples");

  GaussianityReport rep;
  rep.moments = compute_moment_stats(samples, block);
  const auto& m = rep.moments;

  rep.degenerate = m.var_conj <= 1e-14 * (1.0 + std::norm(m.mean));
  if (rep.degenerate) return rep;

  rep.pseudo_ratio = std::abs(m.second_nonconj) / m.var_conj;
  rep.se_pseudo_ratio =
      std::hypot(m.se_second_nonconj / m.var_conj,
                 rep.pseudo_ratio * m.se_var_conj / m.var_conj);

  // Marginal skewnesses with batch-means errors.
  const std::size_t n = samples.size();
  const std::size_t nb = (n + block - 1) / block;
  for (int part = 0; part < 2; ++part) {
    double mu = part == 0 ? m.mean.real() : m.mean.imag();
    double v = 0.0;
    for (const auto& z : samples) {
      const double d = (part == 0 ? z.real() : z.imag()) - mu;
      v += d * d;
    }
    v /= static_cast<double>(n);
    const double sd = std::sqrt(v);
    double m3 = 0.0;
    std::vector<double> blocks;
    blocks.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t lo = b * block;
      const std::size_t hi = std::min(n, lo + block);
      double s3 = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double d = (part == 0 ? samples[i].real() : samples[i].imag()) - mu;
        s3 += d * d * d;
      }
      blocks.push_back(s3 / static_cast<double>(hi - lo) / (sd * sd * sd));
      m3 += s3;
    }
    const double skew = m3 / static_cast<double>(n) / (sd * sd * sd);
    const double se = block_se(blocks, skew);
    if (part == 0) {
      rep.skew_re = skew;
      rep.se_skew_re = se;
    } else {
      rep.skew_im = skew;
      rep.se_skew_im = se;
    }
  }
  return rep;
}

}  // namespace rswave
