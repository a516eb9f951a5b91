#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace rswave::quad {

/// Outcome of an adaptive integration. `converged` is false when the error
/// target was not reached within the subdivision budget; `value` then still
/// carries the best available estimate.
template <typename T>
struct Result {
  T value{};
  double abs_error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_segments = 2000;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b].
Result<double> integrate(const std::function<double(double)>& f, double a,
                         double b, const Options& opt = {});
Result<std::complex<double>> integrate(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const Options& opt = {});

/// Iterated adaptive integration over the axis-aligned box [lo, hi]^d,
/// d <= 3. Inner dimensions run at a tightened tolerance.
Result<double> integrate_box(const std::function<double(const double*)>& f,
                             std::span<const double> lo,
                             std::span<const double> hi,
                             const Options& opt = {});
Result<std::complex<double>> integrate_box(
    const std::function<std::complex<double>(const double*)>& f,
    std::span<const double> lo, std::span<const double> hi,
    const Options& opt = {});

/// Fixed composite Gauss-Legendre rule (20 nodes per panel) on [a, b].
/// Not adaptive; used where a deterministic flat-cost rule is wanted.
double composite_gauss(const std::function<double(double)>& f, double a,
                       double b, int panels);
std::complex<double> composite_gauss(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels);

}  // namespace rswave::quad
