#pragma once

// Minimal extended-precision complex type.  std::complex is only specified for
// the builtin floating types, and no MPC-backed complex is available, so the
// handful of operations the library needs live here.

#include "ccf/real.hpp"

#include <complex>

namespace ccf {

struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r) : re(std::move(r)) {}  // NOLINT: implicit real->complex
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_std() const { return {to_double(re), to_double(im)}; }
};

inline Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
inline Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }

inline Complex conj(const Complex& a) { return {a.re, -a.im}; }
inline Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Complex& a) {
  using std::hypot;
  return hypot(a.re, a.im);
}

inline Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }
inline Complex operator/(const Complex& a, const Complex& b) {
  Real d = norm(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

inline Complex& operator+=(Complex& a, const Complex& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}
inline Complex& operator-=(Complex& a, const Complex& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}
inline Complex& operator*=(Complex& a, const Complex& b) {
  a = a * b;
  return a;
}

inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

// e^{i t}
inline Complex unit_phase(const Real& t) {
  using std::cos;
  using std::sin;
  return {cos(t), sin(t)};
}

}  // namespace ccf
