#include "rswave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace rswave::quad {
namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename T>
double vnorm(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::abs(v);
  } else {
    return std::abs(v);
  }
}

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
};

template <typename T>
void gk15(const std::function<T(double)>& f, double a, double b, T& value,
          double& error, std::size_t& evals) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  T fc = f(mid);
  T result_gauss = kWg[3] * fc;
  T result_kronrod = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    T f1 = f(mid - dx);
    T f2 = f(mid + dx);
    result_kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  value = result_kronrod * half;
  // |K - G| is a conservative error estimate for smooth integrands.
  error = vnorm((result_kronrod - result_gauss) * half);
}

template <typename T>
Result<T> integrate_impl(const std::function<T(double)>& f, double a, double b,
                         const Options& opt) {
  Result<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  auto cmp = [](const Segment<T>& x, const Segment<T>& y) {
    return x.error < y.error;
  };
  std::priority_queue<Segment<T>, std::vector<Segment<T>>, decltype(cmp)> heap(
      cmp);

  Segment<T> s0;
  s0.a = a;
  s0.b = b;
  gk15(f, a, b, s0.value, s0.error, out.evaluations);
  T total = s0.value;
  double total_err = s0.error;
  heap.push(s0);

  auto tolerance = [&](const T& v) {
    return std::max(opt.abs_tol, opt.rel_tol * vnorm(v));
  };

  while (total_err > tolerance(total) && heap.size() < opt.max_segments) {
    Segment<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment<T> left{worst.a, mid, T{}, 0.0};
    Segment<T> right{mid, worst.b, T{}, 0.0};
    gk15(f, left.a, left.b, left.value, left.error, out.evaluations);
    gk15(f, right.a, right.b, right.value, right.error, out.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (mid == worst.a || mid == worst.b) break;  // interval exhausted
  }

  out.value = total;
  out.abs_error = total_err;
  out.converged = total_err <= tolerance(total);
  return out;
}

template <typename T>
Result<T> integrate_box_impl(const std::function<T(const double*)>& f,
                             std::span<const double> lo,
                             std::span<const double> hi, const Options& opt) {
  const int d = static_cast<int>(lo.size());
  double x[3] = {0.0, 0.0, 0.0};
  std::size_t evals = 0;
  bool inner_ok = true;

  // Inner dimensions run tighter so the outer error estimate dominates.
  Options inner_opt = opt;
  inner_opt.abs_tol = opt.abs_tol * 0.1;
  inner_opt.rel_tol = opt.rel_tol * 0.1;

  std::function<T(int)> level = [&](int axis) -> T {
    if (axis == d - 1) {
      auto res = integrate_impl<T>(
          [&](double t) {
            x[axis] = t;
            return f(x);
          },
          lo[axis], hi[axis], axis == 0 ? opt : inner_opt);
      evals += res.evaluations;
      if (!res.converged) inner_ok = false;
      return res.value;
    }
    auto res = integrate_impl<T>(
        [&](double t) {
          x[axis] = t;
          return level(axis + 1);
        },
        lo[axis], hi[axis], axis == 0 ? opt : inner_opt);
    evals += res.evaluations;
    if (!res.converged) inner_ok = false;
    return res.value;
  };

  Result<T> out;
  if (d == 1) {
    out = integrate_impl<T>(
        [&](double t) {
          x[0] = t;
          return f(x);
        },
        lo[0], hi[0], opt);
    return out;
  }

  auto outer = integrate_impl<T>(
      [&](double t) {
        x[0] = t;
        return level(1);
      },
      lo[0], hi[0], opt);
  out.value = outer.value;
  out.abs_error = outer.abs_error;
  out.evaluations = evals + outer.evaluations;
  out.converged = outer.converged && inner_ok;
  return out;
}

// 20-point Gauss-Legendre nodes/weights on [-1, 1], positive half.
constexpr double kGl20X[10] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
constexpr double kGl20W[10] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};

template <typename T>
T composite_gauss_impl(const std::function<T(double)>& f, double a, double b,
                       int panels) {
  T total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + p * h;
    const double mid = pa + 0.5 * h;
    const double half = 0.5 * h;
    T acc{};
    for (int j = 0; j < 10; ++j) {
      acc += kGl20W[j] * (f(mid - half * kGl20X[j]) + f(mid + half * kGl20X[j]));
    }
    total += acc * half;
  }
  return total;
}

}  // namespace

Result<double> integrate(const std::function<double(double)>& f, double a,
                         double b, const Options& opt) {
  return integrate_impl<double>(f, a, b, opt);
}

Result<std::complex<double>> integrate(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const Options& opt) {
  return integrate_impl<std::complex<double>>(f, a, b, opt);
}

Result<double> integrate_box(const std::function<double(const double*)>& f,
                             std::span<const double> lo,
                             std::span<const double> hi, const Options& opt) {
  return integrate_box_impl<double>(f, lo, hi, opt);
}

Result<std::complex<double>> integrate_box(
    const std::function<std::complex<double>(const double*)>& f,
    std::span<const double> lo, std::span<const double> hi,
    const Options& opt) {
  return integrate_box_impl<std::complex<double>>(f, lo, hi, opt);
}

double composite_gauss(const std::function<double(double)>& f, double a,
                       double b, int panels) {
  return composite_gauss_impl<double>(f, a, b, panels);
}

std::complex<double> composite_gauss(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels) {
  return composite_gauss_impl<std::complex<double>>(f, a, b, panels);
}

}  // namespace rswave::quad
