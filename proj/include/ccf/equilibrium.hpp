#pragma once

// Equilibrium measures of the supported geometries:
//   - finite unions of real intervals: density
//         omega(x) = prod |x - lambda_j| / (pi * sqrt(prod |x - a_j|)),
//     with one gap root lambda_j per gap, determined by the vanishing of the
//     gap integrals; cumulative measure by singularity-absorbing quadrature
//   - circles of radius r: uniform density 1/(2 pi r)
//   - polynomial lemniscates {|T| = 1}: density |T'(z)| / (2 pi N), whose
//     cumulative measure is linear in the level-set angle
// plus the endpoint constants M(Gamma, a) = lim sqrt(|x - a|) * omega(x).
//
// All evaluations run at the active precision.  Parameter-space helpers
// (mass_between / invert_mass) speak the natural coordinate of each geometry:
// the real coordinate on interval unions, the angle on circles, and the
// level-set angle on lemniscates.

#include "ccf/complex.hpp"
#include "ccf/errors.hpp"
#include "ccf/polynomial.hpp"
#include "ccf/real.hpp"
#include "ccf/support.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace ccf {

// Gap roots lambda_0 < ... < lambda_{k0-1} of the interval union with the
// given sorted endpoints a_0 < a_1 < ... < a_{2 k0 + 1}: the roots of the
// monic degree-k0 polynomial whose weighted integral vanishes over every gap.
// The defining integrals are linear in the coefficients; the system is solved
// directly and the roots are then bisected within their gaps.
std::vector<double> gap_roots(const std::vector<double>& endpoints);

class EquilibriumDensity {
 public:
  struct IntervalUnion {
    std::vector<double> endpoints;  // a_0 < a_1 < ... < a_{2k0+1}
    std::vector<double> gap_roots;  // lambda_j, one per gap
  };
  struct Circle {
    double radius = 1.0;
  };
  struct LemniscateShape {
    ComplexPolynomial T;
    int N = 0;  // degree of T
    std::shared_ptr<const LemniscateCurve> curve;
    int component = 0;  // component used by the parameter-space helpers
  };
  using Shape = std::variant<IntervalUnion, Circle, LemniscateShape>;

  explicit EquilibriumDensity(Shape shape);

  const Shape& shape() const { return shape_; }

  // Density with respect to arclength at a point of the support.  Interval
  // endpoints carry an inverse-square-root divergence: evaluation exactly at
  // one returns +infinity.
  Real eval(const Complex& z) const;
  Real eval(const Real& x) const;  // real-coordinate convenience

  // Equilibrium measure of the support between two of its points (signed by
  // traversal direction: positive from ref towards increasing parameter).
  Real cumulative(const Complex& ref, const Complex& z, const Real& tol = Real(1e-12)) const;

  // Signed equilibrium mass between two parameter values; only the support
  // between them counts on interval unions.
  Real mass_between(const Real& u, const Real& v, const Real& tol = Real(1e-12)) const;

  // The parameter t with mass_between(from, t) = mass (mass may be negative).
  // Walks across gaps on interval unions; errors if the support runs out.
  Real invert_mass(const Real& from, const Real& mass, const Real& tol = Real(1e-12)) const;

  // Total mass recomputed by quadrature (the defining normalization is 1).
  Real mass(const Real& tol = Real(1e-10)) const;

 private:
  Shape shape_;
};

// Density of the union with the given endpoints; computes the gap roots.
EquilibriumDensity density_intervals(const std::vector<double>& endpoints);

// M(Gamma, a) for an endpoint a of the union: the gap-root product over
// pi * sqrt(product of |a - a_j| over the other endpoints).
Real endpoint_constant(const std::vector<double>& endpoints, double a);

// Density |T'|/(2 pi N) on the level set {|T| = 1}; validates that the level
// set is free of self-intersections (no critical value of modulus 1).
EquilibriumDensity density_lemniscate(const ComplexPolynomial& T);

}  // namespace ccf
