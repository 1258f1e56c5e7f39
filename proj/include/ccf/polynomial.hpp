#pragma once

// Dense complex polynomials with double-precision coefficients, plus
// simultaneous root finding (Durand-Kerner / Weierstrass iteration).  These
// serve the lemniscate machinery: level-set parametrization, preimage fibers
// T(u) = w, and the equilibrium density |T'|/(2 pi N).  Extended-precision
// evaluation is provided so curve points can be polished to the active
// precision.

#include "ccf/complex.hpp"
#include "ccf/errors.hpp"
#include "ccf/real.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace ccf {

using Cd = std::complex<double>;

struct ComplexPolynomial {
  // coeffs[k] multiplies z^k; coeffs.back() != 0.
  std::vector<Cd> coeffs;

  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<Cd> c);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  Cd eval(Cd z) const;
  Cd eval_derivative(Cd z) const;
  ComplexPolynomial derivative() const;

  // Extended-precision Horner evaluation (coefficients promoted exactly).
  Complex eval(const Complex& z) const;
  Complex eval_derivative(const Complex& z) const;
};

// All complex roots (with multiplicity) by the Durand-Kerner iteration.
// tol is on the sum of squared step sizes, relative to the root scale.
std::vector<Cd> polynomial_roots(const ComplexPolynomial& p, double tol = 1e-13);

// Solutions u of T(u) = w (the fiber of w under T), Durand-Kerner on T - w.
std::vector<Cd> preimages(const ComplexPolynomial& t, Cd w, double tol = 1e-13);

}  // namespace ccf
