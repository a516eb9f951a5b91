#pragma once

#include <array>
#include <cassert>
#include <cstddef>

namespace rswave {

/// Point in R^d for d <= 3. Unused components stay zero so norms and dot
/// products can ignore the dimension.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 1;

  Vec() = default;
  explicit Vec(double x) : c{x, 0.0, 0.0}, dim(1) {}
  Vec(double x, double y) : c{x, y, 0.0}, dim(2) {}
  Vec(double x, double y, double z) : c{x, y, z}, dim(3) {}

  static Vec zero(int d) {
    Vec v;
    v.dim = d;
    return v;
  }

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  double norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }

  friend Vec operator+(Vec a, const Vec& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < 3; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Vec operator-(Vec a, const Vec& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < 3; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Vec operator-(Vec a) {
    for (int i = 0; i < 3; ++i) a.c[i] = -a.c[i];
    return a;
  }
  friend Vec operator*(double s, Vec a) {
    for (int i = 0; i < 3; ++i) a.c[i] *= s;
    return a;
  }
  friend double dot(const Vec& a, const Vec& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
  }
  friend bool operator==(const Vec& a, const Vec& b) {
    return a.dim == b.dim && a.c == b.c;
  }
};

}  // namespace rswave
