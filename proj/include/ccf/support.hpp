#pragma once

// Support geometry: the component variant making up a measure's support, and
// a uniform parametrization interface over it.
//
// Lemniscates {|T(z)|=1} are parametrized through the level-set angle: the
// continuation z(theta) with T(z(theta)) = e^{i theta} traverses one Jordan
// component as theta runs over [0, 2*pi*winding], where the winding equals
// the number of fiber points of T(z)=1 lying on that component.  The
// continuation is tabulated once in double precision at construction;
// point queries Newton-polish the tabulated seed to the active precision.
// A convenient consequence used throughout: along the curve,
// ds = |dz| = d theta / |T'(z)|.

#include "ccf/complex.hpp"
#include "ccf/errors.hpp"
#include "ccf/polynomial.hpp"
#include "ccf/real.hpp"

#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace ccf {

class LemniscateCurve {
 public:
  // Validates the no-self-intersection condition (every critical value stays
  // away from modulus 1) and traces all components of {|T|=1}.
  explicit LemniscateCurve(ComplexPolynomial t);

  const ComplexPolynomial& poly() const { return t_; }
  int degree() const { return n_; }
  int component_count() const { return static_cast<int>(components_.size()); }
  int winding(int comp) const { return components_.at(comp).winding; }
  // Arc length of the component (computed from the trace, ~1e-9 accuracy).
  double length_estimate(int comp) const { return components_.at(comp).length; }

  // Curve point at level-set angle theta in [0, 2*pi*winding], double seed.
  Cd point_d(int comp, double theta) const;
  // Same point polished to the active precision.
  Complex point(int comp, const Real& theta) const;
  // Velocity dz/dtheta = i e^{i theta} / T'(z).
  Complex velocity(int comp, const Real& theta) const;

  // Level-set angle of a point lying on the given component (within snap_tol
  // of the curve); also returns the snapped on-curve point.
  struct Location {
    double theta;
    Cd snapped;
  };
  Location locate(int comp, Cd z, double snap_tol = 1e-9) const;

 private:
  struct Component {
    int winding = 1;
    std::vector<double> thetas;  // increasing, [0, 2*pi*winding]
    std::vector<Cd> points;      // z(thetas[i])
    double length = 0;
  };

  Cd newton_d(Cd seed, double theta) const;

  ComplexPolynomial t_;
  ComplexPolynomial dt_;
  int n_ = 0;
  std::vector<Component> components_;
};

struct RealInterval {
  double a;
  double b;
};

struct UnitCircle {};

struct CircularArc {
  Cd center;
  double radius;
  double t1;
  double t2;
};

struct Lemniscate {
  ComplexPolynomial T;
  int which = 0;  // component selector on multi-component level sets
  std::shared_ptr<const LemniscateCurve> curve;  // built by make_component
};

struct ParametricArc {
  std::function<Cd(double)> gamma;   // [0,1] -> C
  std::function<Cd(double)> dgamma;  // derivative, nonvanishing
};

using SupportComponent = std::variant<RealInterval, UnitCircle, CircularArc, Lemniscate, ParametricArc>;

// Validate a component and (for lemniscates) build the traced curve.
SupportComponent make_component(SupportComponent c);

// Uniform parametrization z = point(t), t in [t0, t1].
struct Parametrization {
  Real t0;
  Real t1;
  bool closed = false;
  std::function<Complex(const Real&)> point;
  std::function<Complex(const Real&)> velocity;  // dz/dt
  // double-precision shadow for seeding/scanning
  std::function<Cd(double)> point_d;
};

Parametrization parametrize(const SupportComponent& c);

// Arc length of the component at the active precision (adaptive quadrature
// for the general cases, closed forms where available).
Real component_length(const SupportComponent& c, const Real& tol);

// Where a point sits on a component.
struct PointLocation {
  bool on_component = false;
  bool at_endpoint = false;
  Real t;        // parameter of the (snapped) point
  Complex snapped;  // the on-support point actually used for singular weights
};

PointLocation locate_point(const SupportComponent& c, Cd z, double tol = 1e-9);

}  // namespace ccf
