#pragma once

#include <array>
#include <cmath>

// Forward-mode dual numbers. Grad carries value and gradient, Jet adds the
// Hessian. D is the number of independent variables.
namespace kramers::ad {

template <int D>
struct Grad {
  double v = 0.0;
  std::array<double, D> g{};

  Grad() = default;
  Grad(double c) : v(c) {}
  static Grad variable(double value, int i) {
    Grad r(value);
    r.g[i] = 1.0;
    return r;
  }
  // chain rule for a scalar function with derivative d1
  Grad chain(double val, double d1, double) const {
    Grad r(val);
    for (int i = 0; i < D; ++i) r.g[i] = d1 * g[i];
    return r;
  }
};

template <int D>
struct Jet {
  double v = 0.0;
  std::array<double, D> g{};
  std::array<double, D * D> H{};

  Jet() = default;
  Jet(double c) : v(c) {}
  static Jet variable(double value, int i) {
    Jet r(value);
    r.g[i] = 1.0;
    return r;
  }
  Jet chain(double val, double d1, double d2) const {
    Jet r(val);
    for (int i = 0; i < D; ++i) r.g[i] = d1 * g[i];
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) r.H[i * D + j] = d1 * H[i * D + j] + d2 * g[i] * g[j];
    return r;
  }
};

inline double value_of(double x) { return x; }
template <int D> double value_of(const Grad<D>& x) { return x.v; }
template <int D> double value_of(const Jet<D>& x) { return x.v; }

// Grad arithmetic
template <int D> Grad<D> operator+(const Grad<D>& a, const Grad<D>& b) {
  Grad<D> r(a.v + b.v);
  for (int i = 0; i < D; ++i) r.g[i] = a.g[i] + b.g[i];
  return r;
}
template <int D> Grad<D> operator-(const Grad<D>& a, const Grad<D>& b) {
  Grad<D> r(a.v - b.v);
  for (int i = 0; i < D; ++i) r.g[i] = a.g[i] - b.g[i];
  return r;
}
template <int D> Grad<D> operator-(const Grad<D>& a) {
  Grad<D> r(-a.v);
  for (int i = 0; i < D; ++i) r.g[i] = -a.g[i];
  return r;
}
template <int D> Grad<D> operator*(const Grad<D>& a, const Grad<D>& b) {
  Grad<D> r(a.v * b.v);
  for (int i = 0; i < D; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  return r;
}
template <int D> Grad<D> operator/(const Grad<D>& a, const Grad<D>& b) {
  double q = a.v / b.v;
  Grad<D> r(q);
  for (int i = 0; i < D; ++i) r.g[i] = (a.g[i] - q * b.g[i]) / b.v;
  return r;
}
template <int D> Grad<D> operator*(double c, const Grad<D>& a) {
  Grad<D> r(c * a.v);
  for (int i = 0; i < D; ++i) r.g[i] = c * a.g[i];
  return r;
}
template <int D> Grad<D> operator*(const Grad<D>& a, double c) { return c * a; }
template <int D> Grad<D> operator+(const Grad<D>& a, double c) {
  Grad<D> r = a;
  r.v += c;
  return r;
}
template <int D> Grad<D> operator+(double c, const Grad<D>& a) { return a + c; }
template <int D> Grad<D> operator-(const Grad<D>& a, double c) { return a + (-c); }
template <int D> Grad<D> operator-(double c, const Grad<D>& a) { return (-a) + c; }
template <int D> Grad<D> operator/(const Grad<D>& a, double c) { return (1.0 / c) * a; }
template <int D> Grad<D> operator/(double c, const Grad<D>& a) { return Grad<D>(c) / a; }

// Jet arithmetic
template <int D> Jet<D> operator+(const Jet<D>& a, const Jet<D>& b) {
  Jet<D> r(a.v + b.v);
  for (int i = 0; i < D; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < D * D; ++i) r.H[i] = a.H[i] + b.H[i];
  return r;
}
template <int D> Jet<D> operator-(const Jet<D>& a, const Jet<D>& b) {
  Jet<D> r(a.v - b.v);
  for (int i = 0; i < D; ++i) r.g[i] = a.g[i] - b.g[i];
  for (int i = 0; i < D * D; ++i) r.H[i] = a.H[i] - b.H[i];
  return r;
}
template <int D> Jet<D> operator-(const Jet<D>& a) {
  Jet<D> r(-a.v);
  for (int i = 0; i < D; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < D * D; ++i) r.H[i] = -a.H[i];
  return r;
}
template <int D> Jet<D> operator*(const Jet<D>& a, const Jet<D>& b) {
  Jet<D> r(a.v * b.v);
  for (int i = 0; i < D; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      r.H[i * D + j] = a.H[i * D + j] * b.v + a.v * b.H[i * D + j] + a.g[i] * b.g[j] + b.g[i] * a.g[j];
  return r;
}
template <int D> Jet<D> operator/(const Jet<D>& a, const Jet<D>& b) {
  double iv = 1.0 / b.v;
  return a * b.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
}
template <int D> Jet<D> operator*(double c, const Jet<D>& a) {
  Jet<D> r(c * a.v);
  for (int i = 0; i < D; ++i) r.g[i] = c * a.g[i];
  for (int i = 0; i < D * D; ++i) r.H[i] = c * a.H[i];
  return r;
}
template <int D> Jet<D> operator*(const Jet<D>& a, double c) { return c * a; }
template <int D> Jet<D> operator+(const Jet<D>& a, double c) {
  Jet<D> r = a;
  r.v += c;
  return r;
}
template <int D> Jet<D> operator+(double c, const Jet<D>& a) { return a + c; }
template <int D> Jet<D> operator-(const Jet<D>& a, double c) { return a + (-c); }
template <int D> Jet<D> operator-(double c, const Jet<D>& a) { return (-a) + c; }
template <int D> Jet<D> operator/(const Jet<D>& a, double c) { return (1.0 / c) * a; }
template <int D> Jet<D> operator/(double c, const Jet<D>& a) { return Jet<D>(c) / a; }

template <class T>
concept Dual = requires(const T& t) { t.chain(0.0, 0.0, 0.0); };

// Elementary functions, found by ADL for the dual types.
template <Dual T> T sin(const T& a) { return a.chain(std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
template <Dual T> T cos(const T& a) { return a.chain(std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
template <Dual T> T exp(const T& a) {
  double e = std::exp(a.v);
  return a.chain(e, e, e);
}
template <Dual T> T log(const T& a) { return a.chain(std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
template <Dual T> T tanh(const T& a) {
  double t = std::tanh(a.v);
  double s = 1.0 - t * t;
  return a.chain(t, s, -2.0 * t * s);
}
// a^c for constant real c, a > 0
template <Dual T> T pow_const(const T& a, double c) {
  double p = std::pow(a.v, c);
  return a.chain(p, c * std::pow(a.v, c - 1.0), c * (c - 1.0) * std::pow(a.v, c - 2.0));
}
inline double pow_const(double a, double c) { return std::pow(a, c); }

// integer power by repeated squaring; negative n via reciprocal
template <Dual T> T ipow(const T& a, int n) {
  if (n == 0) return T(1.0);
  if (n < 0) return T(1.0) / ipow(a, -n);
  T result(1.0);
  T base = a;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}
inline double ipow(double a, int n) {
  if (n < 0) return 1.0 / ipow(a, -n);
  double r = 1.0;
  double b = a;
  while (n > 0) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n) b *= b;
  }
  return r;
}

}  // namespace kramers::ad
