#pragma once

// Gauss-Jacobi quadrature with arbitrary real exponents p,q > -1, composite
// schemes for algebraic endpoint singularities, and arc-length integration
// over support components.  Everything runs at the caller's active precision
// (rules are cached per precision and rebuilt when it changes).

#include "ccf/errors.hpp"
#include "ccf/real.hpp"
#include "ccf/support.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ccf {

struct QuadratureRule {
  std::vector<Real> nodes;    // strictly increasing, in (-1,1)
  std::vector<Real> weights;  // strictly positive
  Real p;                     // weight (1-x)^p (1+x)^q
  Real q;
  int order = 0;
};

// Rule with `order` nodes, exact for polynomials of degree <= 2*order-1
// against (1-x)^p(1+x)^q on [-1,1].
QuadratureRule gauss_jacobi(int order, const Real& p, const Real& q);

// Cached Gauss-Legendre (p = q = 0) at the active precision.
const QuadratureRule& gauss_legendre(int order);

// integral_a^b f(x) |x-s|^alpha dx  (plain integral when s is absent).
// The interval is split at s; each side combines dyadic Gauss-Legendre shells
// with one Gauss-Jacobi panel touching the singularity.  The scheme is
// refined until two successive refinements agree to tol (relative to the
// integral of |f|); throws QuadratureError otherwise.
Real integrate_singular(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                        std::optional<Real> s, const Real& alpha, const Real& tol);

// Convenience overload without a singular point.
Real integrate_smooth(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                      const Real& tol);

// integral of g over the component against arc length ds.
Real integrate_arc(const SupportComponent& component, const std::function<Real(const Complex&)>& g,
                   const Real& tol);

}  // namespace ccf
