#pragma once

// Dense Hermitian linear algebra at extended precision: Cholesky
// factorization, triangular solves, and the residual check used by the
// precision-escalation policy.  The matrices involved are small (a few
// hundred rows), so a plain O(n^3) implementation with full-precision scalars
// is both simpler and more reliable than adapting an external solver to the
// MPFR scalar type.

#include "ccf/complex.hpp"
#include "ccf/errors.hpp"
#include "ccf/real.hpp"

#include <cstddef>
#include <vector>

namespace ccf {
namespace detail {

inline Real conj_of(const Real& x) { return x; }
inline Complex conj_of(const Complex& x) { return conj(x); }
inline Real real_part(const Real& x) { return x; }
inline Real real_part(const Complex& x) { return x.re; }
inline Real abs_of(const Real& x) {
  using std::abs;
  return abs(x);
}
inline Real abs_of(const Complex& x) { return abs(x); }

}  // namespace detail

// Row-major dense square matrix of Real or Complex entries.
template <class S>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<S> a;  // n*n entries, row major

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t rows) : n(rows), a(rows * rows) {}
  S& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Lower-triangular Cholesky factor G = L L^H.  Throws IllConditionedError if a
// pivot is not strictly positive (G not numerically positive definite at the
// working precision).
template <class S>
SquareMatrix<S> cholesky(const SquareMatrix<S>& g) {
  using std::sqrt;
  const std::size_t n = g.n;
  SquareMatrix<S> l(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      S sum = g(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * detail::conj_of(l(j, k));
      if (i == j) {
        Real d = detail::real_part(sum);
        if (!(d > 0)) {
          throw IllConditionedError("cholesky: non-positive pivot at row " + std::to_string(i), 0.0,
                                    0.0);
        }
        l(i, i) = S(sqrt(d));
      } else {
        l(i, j) = sum / detail::real_part(l(j, j));
      }
    }
  }
  return l;
}

// Solve L y = b for lower-triangular L, using only the leading m x m block.
template <class S>
std::vector<S> forward_solve(const SquareMatrix<S>& l, const std::vector<S>& b, std::size_t m) {
  std::vector<S> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    S sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * y[k];
    y[i] = sum / detail::real_part(l(i, i));
  }
  return y;
}

// Solve L^H x = y on the leading m x m block.
template <class S>
std::vector<S> backward_solve_adjoint(const SquareMatrix<S>& l, const std::vector<S>& y,
                                      std::size_t m) {
  std::vector<S> x(m);
  for (std::size_t ii = m; ii-- > 0;) {
    S sum = y[ii];
    for (std::size_t k = ii + 1; k < m; ++k) sum -= detail::conj_of(l(k, ii)) * x[k];
    x[ii] = sum / detail::real_part(l(ii, ii));
  }
  return x;
}

// Relative residual max|G - L L^H| / max|G| over the leading m x m block;
// used to confirm a factorization is trustworthy at the working precision.
template <class S>
Real cholesky_residual(const SquareMatrix<S>& g, const SquareMatrix<S>& l, std::size_t m) {
  Real num(0), den(0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      S sum{};
      for (std::size_t k = 0; k <= j; ++k) sum += l(i, k) * detail::conj_of(l(j, k));
      Real r = detail::abs_of(S(g(i, j) - sum));
      if (r > num) num = r;
      Real gm = detail::abs_of(g(i, j));
      if (gm > den) den = gm;
    }
  }
  if (den == 0) return num;
  return num / den;
}

inline Real norm_of(const Real& x) { return x * x; }
inline Real norm_of(const Complex& x) { return norm(x); }

// ||L^{-1} b||^2 on the leading m x m block (the quadratic form b^H G^{-1} b).
template <class S>
Real inverse_quadratic_form(const SquareMatrix<S>& l, const std::vector<S>& b, std::size_t m) {
  std::vector<S> y = forward_solve(l, b, m);
  Real s(0);
  for (std::size_t i = 0; i < m; ++i) s += norm_of(y[i]);
  return s;
}

}  // namespace ccf
