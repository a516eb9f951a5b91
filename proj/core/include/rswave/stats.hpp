#pragma once

#include <complex>
#include <span>

namespace rswave {

/// Ensemble moment estimators for one complex statistic. Standard errors
/// come from batch means over realization blocks (robust to heavy tails in
/// the fourth moment).
struct MomentStats {
  std::size_t n = 0;
  std::complex<double> mean{0.0, 0.0};
  double se_mean = 0.0;  // scalar: sqrt(Var(Re) + Var(Im)) of the mean

  double var_conj = 0.0;  // E |Z - mean|^2
  double se_var_conj = 0.0;

  std::complex<double> second_nonconj{0.0, 0.0};  // E (Z - mean)^2
  double se_second_nonconj = 0.0;

  double fourth_abs = 0.0;  // E |Z - mean|^4
  double se_fourth_abs = 0.0;

  double kurtosis_ratio = 0.0;  // fourth_abs / var_conj^2 (2 for circular Gaussian)
  double se_kurtosis_ratio = 0.0;
};

inline constexpr std::size_t kDefaultBlock = 32;

MomentStats compute_moment_stats(std::span<const std::complex<double>> samples,
                                 std::size_t block = kDefaultBlock);

/// Gaussianity evidence for a complex sample: kurtosis ratio (2 for a
/// circular complex Gaussian), pseudo-variance ratio |E Z^2| / E |Z|^2
/// (0 when circular, 1 when real), and marginal skewnesses. Requires
/// n >= 100; throws otherwise.
struct GaussianityReport {
  MomentStats moments;
  double pseudo_ratio = 0.0;
  double se_pseudo_ratio = 0.0;
  double skew_re = 0.0, se_skew_re = 0.0;
  double skew_im = 0.0, se_skew_im = 0.0;
  bool degenerate = false;  // var_conj numerically zero
};

GaussianityReport gaussianity_diagnostics(
    std::span<const std::complex<double>> samples,
    std::size_t block = kDefaultBlock);

}  // namespace rswave
