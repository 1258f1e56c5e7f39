#include "ccf/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccf {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

// ---------------------------------------------------------------------------
// LemniscateCurve

Cd LemniscateCurve::newton_d(Cd seed, double theta) const {
  Cd target = std::polar(1.0, theta);
  Cd z = seed;
  for (int it = 0; it < 50; ++it) {
    Cd f = t_.eval(z) - target;
    Cd df = dt_.eval(z);
    if (std::abs(df) == 0.0) throw Error("lemniscate trace: vanishing T' during Newton");
    Cd step = f / df;
    z -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) return z;
  }
  throw Error("lemniscate trace: Newton did not converge");
}

LemniscateCurve::LemniscateCurve(ComplexPolynomial t) : t_(std::move(t)), dt_(t_.derivative()) {
  n_ = t_.degree();
  if (n_ < 1) throw InvalidInputError("lemniscate: defining polynomial must be non-constant");

  // Self-intersection check: no critical value on the unit circle.
  if (n_ >= 2) {
    for (Cd zc : polynomial_roots(dt_)) {
      double cv = std::abs(t_.eval(zc));
      if (std::abs(cv - 1.0) <= 1e-9) {
        throw InvalidInputError("lemniscate: level set {|T|=1} self-intersects (critical value " +
                                std::to_string(cv) + ")");
      }
    }
  }

  // Fiber over 1: the starting points of the components, ordered
  // deterministically.
  std::vector<Cd> fiber = preimages(t_, Cd(1.0, 0.0));
  std::sort(fiber.begin(), fiber.end(), [](Cd a, Cd b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  double fiber_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fiber.size(); ++i)
    for (std::size_t j = i + 1; j < fiber.size(); ++j)
      fiber_sep = std::min(fiber_sep, std::abs(fiber[i] - fiber[j]));

  std::vector<bool> used(fiber.size(), false);
  for (std::size_t start = 0; start < fiber.size(); ++start) {
    if (used[start]) continue;
    Component comp;
    Cd z = fiber[start];
    double theta = 0.0;
    comp.thetas.push_back(theta);
    comp.points.push_back(z);
    used[start] = true;

    double h = kTwoPi / (64.0 * n_);
    const double h_min = kTwoPi / (1 << 22);
    int guard = 0;
    while (true) {
      if (++guard > (1 << 22)) throw Error("lemniscate trace: runaway continuation");
      double theta_next = theta + h;
      // Do not step across a multiple of 2*pi (fiber bookkeeping happens there).
      double next_period = (std::floor(theta / kTwoPi) + 1.0) * kTwoPi;
      bool at_period = false;
      if (theta_next >= next_period - 1e-13) {
        theta_next = next_period;
        at_period = true;
      }
      Cd df = dt_.eval(z);
      Cd predictor = z + Cd(0, 1) * std::polar(1.0, theta) * (theta_next - theta) / df;
      Cd corrected;
      bool ok = true;
      try {
        corrected = newton_d(predictor, theta_next);
      } catch (const Error&) {
        ok = false;
      }
      // Reject steps where the corrector moved far from the predictor (risk
      // of hopping to another sheet near a critical point).
      double move = std::abs(corrected - predictor);
      double scale = std::abs(predictor - z) + 1e-30;
      if (!ok || move > 0.25 * scale) {
        h *= 0.5;
        if (h < h_min) throw Error("lemniscate trace: step size underflow");
        continue;
      }
      comp.length += std::abs(corrected - z);
      theta = theta_next;
      z = corrected;
      comp.thetas.push_back(theta);
      comp.points.push_back(z);
      if (move < 0.01 * scale) h = std::min(h * 1.4, kTwoPi / (16.0 * n_));

      if (at_period) {
        // Which fiber point did we land on?
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < fiber.size(); ++i) {
          double d = std::abs(z - fiber[i]);
          if (d < best) {
            best = d;
            nearest = i;
          }
        }
        if (best > 0.25 * fiber_sep && fiber.size() > 1)
          throw Error("lemniscate trace: lost the fiber at a period boundary");
        if (nearest == start) break;  // component closed
        if (used[nearest])
          throw Error("lemniscate trace: fiber permutation inconsistency");
        used[nearest] = true;
      }
    }
    comp.winding = static_cast<int>(std::lround(comp.thetas.back() / kTwoPi));
    components_.push_back(std::move(comp));
  }
}

Cd LemniscateCurve::point_d(int comp, double theta) const {
  const Component& c = components_.at(comp);
  double span = c.thetas.back();
  // wrap into [0, span)
  theta = std::fmod(theta, span);
  if (theta < 0) theta += span;
  auto it = std::upper_bound(c.thetas.begin(), c.thetas.end(), theta);
  std::size_t idx = (it == c.thetas.begin()) ? 0 : (it - c.thetas.begin() - 1);
  // Seed from the nearer table neighbor, then polish.
  Cd seed = c.points[idx];
  if (idx + 1 < c.points.size() && theta - c.thetas[idx] > c.thetas[idx + 1] - theta)
    seed = c.points[idx + 1];
  return newton_d(seed, theta);
}

Complex LemniscateCurve::point(int comp, const Real& theta) const {
  using std::abs;
  Cd zd = point_d(comp, to_double(theta));
  Complex target = unit_phase(theta);
  Complex z(zd);
  // Newton at the active precision; quadratic convergence from a ~1e-14 seed.
  Real tol = pow_real(Real(2), -Real(static_cast<long>(current_precision_bits())) + 8);
  Real scale = abs(z) + Real(1);
  for (int it = 0; it < 64; ++it) {
    Complex f = t_.eval(z) - target;
    Complex df = t_.eval_derivative(z);
    Complex step = f / df;
    z -= step;
    if (abs(step) < tol * scale) break;
  }
  return z;
}

Complex LemniscateCurve::velocity(int comp, const Real& theta) const {
  Complex z = point(comp, theta);
  Complex df = t_.eval_derivative(z);
  Complex i_eitheta = Complex(Real(0), Real(1)) * unit_phase(theta);
  return i_eitheta / df;
}

LemniscateCurve::Location LemniscateCurve::locate(int comp, Cd z, double snap_tol) const {
  double mod = std::abs(t_.eval(z));
  if (std::abs(mod - 1.0) > snap_tol)
    throw InvalidInputError("point is not on the lemniscate (|T(z)| = " + std::to_string(mod) + ")");
  const Component& c = components_.at(comp);
  double base = std::arg(t_.eval(z));  // (-pi, pi]
  if (base < 0) base += kTwoPi;
  // Try each lift of the angle on this component, choose the branch whose
  // curve point is nearest to z.
  double best_theta = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < c.winding; ++k) {
    double theta = base + kTwoPi * k;
    Cd p = point_d(comp, theta);
    double d = std::abs(p - z);
    if (d < best_dist) {
      best_dist = d;
      best_theta = theta;
    }
  }
  if (best_dist > std::max(1e-6, 100 * snap_tol))
    throw InvalidInputError("point lies on {|T|=1} but not on the selected component");
  return {best_theta, point_d(comp, best_theta)};
}

// ---------------------------------------------------------------------------
// Components

SupportComponent make_component(SupportComponent c) {
  if (auto* iv = std::get_if<RealInterval>(&c)) {
    if (!(iv->a < iv->b)) throw InvalidInputError("interval: need a < b");
  } else if (auto* arc = std::get_if<CircularArc>(&c)) {
    if (!(arc->radius > 0)) throw InvalidInputError("arc: radius must be positive");
    if (!(arc->t1 < arc->t2 && arc->t2 <= arc->t1 + kTwoPi + 1e-12))
      throw InvalidInputError("arc: need t1 < t2 <= t1 + 2*pi");
  } else if (auto* lem = std::get_if<Lemniscate>(&c)) {
    if (!lem->curve) lem->curve = std::make_shared<LemniscateCurve>(lem->T);
    if (lem->which < 0 || lem->which >= lem->curve->component_count())
      throw InvalidInputError("lemniscate: component selector out of range");
  } else if (auto* pa = std::get_if<ParametricArc>(&c)) {
    if (!pa->gamma || !pa->dgamma) throw InvalidInputError("parametric arc: missing callables");
  }
  return c;
}

Parametrization parametrize(const SupportComponent& c) {
  Parametrization p;
  if (const auto* iv = std::get_if<RealInterval>(&c)) {
    p.t0 = Real(iv->a);
    p.t1 = Real(iv->b);
    p.point = [](const Real& t) { return Complex(t); };
    p.velocity = [](const Real&) { return Complex(Real(1)); };
    p.point_d = [](double t) { return Cd(t, 0); };
  } else if (std::get_if<UnitCircle>(&c)) {
    p.t0 = Real(0);
    p.t1 = 2 * const_pi();
    p.closed = true;
    p.point = [](const Real& t) { return unit_phase(t); };
    p.velocity = [](const Real& t) { return Complex(Real(0), Real(1)) * unit_phase(t); };
    p.point_d = [](double t) { return std::polar(1.0, t); };
  } else if (const auto* arc = std::get_if<CircularArc>(&c)) {
    Cd center = arc->center;
    double radius = arc->radius;
    bool full = std::abs((arc->t2 - arc->t1) - kTwoPi) < 1e-12;
    p.t0 = Real(arc->t1);
    p.t1 = Real(arc->t2);
    p.closed = full;
    p.point = [center, radius](const Real& t) {
      return Complex(center) + Real(radius) * unit_phase(t);
    };
    p.velocity = [radius](const Real& t) {
      return Complex(Real(0), Real(radius)) * unit_phase(t);
    };
    p.point_d = [center, radius](double t) { return center + std::polar(radius, t); };
  } else if (const auto* lem = std::get_if<Lemniscate>(&c)) {
    auto curve = lem->curve;
    if (!curve) throw Error("lemniscate component not built via make_component");
    int which = lem->which;
    p.t0 = Real(0);
    p.t1 = Real(curve->winding(which)) * 2 * const_pi();
    p.closed = true;
    p.point = [curve, which](const Real& t) { return curve->point(which, t); };
    p.velocity = [curve, which](const Real& t) { return curve->velocity(which, t); };
    p.point_d = [curve, which](double t) { return curve->point_d(which, t); };
  } else if (const auto* pa = std::get_if<ParametricArc>(&c)) {
    auto gamma = pa->gamma;
    auto dgamma = pa->dgamma;
    p.t0 = Real(0);
    p.t1 = Real(1);
    p.point = [gamma](const Real& t) { return Complex(gamma(to_double(t))); };
    p.velocity = [dgamma](const Real& t) { return Complex(dgamma(to_double(t))); };
    p.point_d = gamma;
  }
  return p;
}

PointLocation locate_point(const SupportComponent& c, Cd z, double tol) {
  PointLocation loc;
  if (const auto* iv = std::get_if<RealInterval>(&c)) {
    if (std::abs(z.imag()) > tol) return loc;
    double x = z.real();
    if (x < iv->a - tol || x > iv->b + tol) return loc;
    x = std::clamp(x, iv->a, iv->b);
    loc.on_component = true;
    loc.at_endpoint = (x - iv->a <= tol) || (iv->b - x <= tol);
    if (x - iv->a <= tol) x = iv->a;
    if (iv->b - x <= tol) x = iv->b;
    loc.t = Real(x);
    loc.snapped = Complex(Real(x));
  } else if (std::get_if<UnitCircle>(&c)) {
    double r = std::abs(z);
    if (std::abs(r - 1.0) > tol) return loc;
    double t = std::arg(z);
    if (t < 0) t += kTwoPi;
    loc.on_component = true;
    loc.at_endpoint = false;
    loc.t = Real(t);
    loc.snapped = unit_phase(Real(t));
  } else if (const auto* arc = std::get_if<CircularArc>(&c)) {
    Cd rel = z - arc->center;
    if (std::abs(std::abs(rel) - arc->radius) > tol * std::max(1.0, arc->radius)) return loc;
    double t = std::arg(rel);
    // shift into [t1, t1 + 2*pi)
    while (t < arc->t1 - 1e-14) t += kTwoPi;
    while (t >= arc->t1 + kTwoPi - 1e-14) t -= kTwoPi;
    bool full = std::abs((arc->t2 - arc->t1) - kTwoPi) < 1e-12;
    if (!full && t > arc->t2 + tol / std::max(arc->radius, 1e-30)) return loc;
    t = std::clamp(t, arc->t1, arc->t2);
    loc.on_component = true;
    loc.at_endpoint = !full && (t - arc->t1 <= tol || arc->t2 - t <= tol);
    if (loc.at_endpoint) t = (t - arc->t1 <= tol) ? arc->t1 : arc->t2;
    loc.t = Real(t);
    loc.snapped = Complex(arc->center) + Real(arc->radius) * unit_phase(Real(t));
  } else if (const auto* lem = std::get_if<Lemniscate>(&c)) {
    try {
      auto where = lem->curve->locate(lem->which, z, tol);
      loc.on_component = true;
      loc.at_endpoint = false;  // closed curve
      loc.t = Real(where.theta);
      loc.snapped = lem->curve->point(lem->which, loc.t);
    } catch (const InvalidInputError&) {
      return loc;
    }
  } else if (const auto* pa = std::get_if<ParametricArc>(&c)) {
    // Coarse scan + golden refinement on |gamma(t) - z|.
    double best_t = 0, best_d = std::numeric_limits<double>::infinity();
    const int grid = 4096;
    for (int i = 0; i <= grid; ++i) {
      double t = double(i) / grid;
      double d = std::abs(pa->gamma(t) - z);
      if (d < best_d) {
        best_d = d;
        best_t = t;
      }
    }
    double lo = std::max(0.0, best_t - 2.0 / grid), hi = std::min(1.0, best_t + 2.0 / grid);
    for (int it = 0; it < 200; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (std::abs(pa->gamma(m1) - z) < std::abs(pa->gamma(m2) - z))
        hi = m2;
      else
        lo = m1;
    }
    best_t = 0.5 * (lo + hi);
    best_d = std::abs(pa->gamma(best_t) - z);
    if (best_d > tol) return loc;
    loc.on_component = true;
    loc.at_endpoint = (best_t <= 1e-9 || best_t >= 1 - 1e-9);
    if (best_t <= 1e-9) best_t = 0;
    if (best_t >= 1 - 1e-9) best_t = 1;
    loc.t = Real(best_t);
    loc.snapped = Complex(pa->gamma(best_t));
  }
  return loc;
}

}  // namespace ccf
