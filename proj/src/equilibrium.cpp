#include "ccf/equilibrium.hpp"

#include "ccf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace ccf {
namespace {

using std::abs;
using std::sqrt;

void validate_endpoints(const std::vector<double>& a) {
  if (a.size() < 2 || a.size() % 2 != 0)
    throw InvalidInputError("interval union needs an even number of endpoints, at least 2");
  for (std::size_t j = 1; j < a.size(); ++j)
    if (!(a[j - 1] < a[j])) throw InvalidInputError("endpoints must be strictly increasing");
}

// The density with interval i's own two inverse-square-root factors removed:
// omega(x) = union_rest(x, i) / sqrt((x - A_i)(B_i - x)) on [A_i, B_i].
Real union_rest(const std::vector<double>& a, const std::vector<double>& lam, int i,
                const Real& x) {
  Real num(1);
  for (double l : lam) num *= abs(x - Real(l));
  Real den(1);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j == static_cast<std::size_t>(2 * i) || j == static_cast<std::size_t>(2 * i + 1)) continue;
    den *= abs(x - Real(a[j]));
  }
  return num / (const_pi() * sqrt(den));
}

constexpr int kOrderMenu[] = {24, 32, 48, 64, 96, 128, 192, 256, 384, 512};

// integral over [A_i, x] of f * omega at one quadrature order, anchored at
// whichever interval endpoint is nearer so the absorbed singular factor is
// always the nearby one.
template <class F>
Real anchored_from_left(const std::vector<double>& a, const std::vector<double>& lam, int i,
                        const Real& x, const F& f, int order) {
  const Real A(a[2 * i]), B(a[2 * i + 1]);
  auto smooth = [&](const Real& t) { return f(t) * union_rest(a, lam, i, t); };

  auto left_panel = [&](const Real& hi) {  // integral over [A, hi], singular at A
    if (!(hi > A)) return Real(0);
    QuadratureRule gj = gauss_jacobi(order, Real(0), Real(-0.5));
    Real half = (hi - A) / 2, acc(0);
    for (int k = 0; k < gj.order; ++k) {
      Real t = A + half * (1 + gj.nodes[k]);
      acc += gj.weights[k] * smooth(t) / sqrt(B - t);
    }
    return acc * sqrt(half);
  };
  auto right_panel = [&](const Real& lo) {  // integral over [lo, B], singular at B
    if (!(lo < B)) return Real(0);
    QuadratureRule gj = gauss_jacobi(order, Real(-0.5), Real(0));
    Real half = (B - lo) / 2, acc(0);
    for (int k = 0; k < gj.order; ++k) {
      Real t = lo + half * (1 + gj.nodes[k]);
      acc += gj.weights[k] * smooth(t) / sqrt(t - A);
    }
    return acc * sqrt(half);
  };
  auto full = [&]() {  // both endpoint singularities absorbed at once
    QuadratureRule gj = gauss_jacobi(order, Real(-0.5), Real(-0.5));
    Real mid = (A + B) / 2, half = (B - A) / 2, acc(0);
    for (int k = 0; k < gj.order; ++k) acc += gj.weights[k] * smooth(mid + half * gj.nodes[k]);
    return acc;
  };

  if (x <= A) return Real(0);
  if (x >= B) return full();
  if (x - A <= B - x) return left_panel(x);
  return full() - right_panel(x);
}

// integral over [p, q] subset of [A_i, B_i] of f * omega, with escalating
// order until two consecutive attempts agree.
template <class F>
Real piece_integral(const std::vector<double>& a, const std::vector<double>& lam, int i,
                    const Real& p, const Real& q, const F& f, const Real& tol) {
  Real prev(0);
  bool have_prev = false;
  double best = std::numeric_limits<double>::infinity();
  for (int order : kOrderMenu) {
    Real v = anchored_from_left(a, lam, i, q, f, order) -
             anchored_from_left(a, lam, i, p, f, order);
    if (have_prev) {
      Real diff = abs(v - prev);
      Real scale = abs(v);
      if (scale < 1) scale = 1;
      if (diff <= tol * scale) return v;
      best = std::min(best, to_double(diff / scale));
    }
    prev = v;
    have_prev = true;
  }
  throw QuadratureError("equilibrium: interval piece integral did not converge", to_double(tol),
                        best);
}

struct LocatedAngle {
  int component = -1;
  double theta = 0;
};

LocatedAngle locate_on_level_set(const EquilibriumDensity::LemniscateShape& s, Cd z) {
  for (int c = 0; c < s.curve->component_count(); ++c) {
    try {
      auto where = s.curve->locate(c, z, 1e-7);
      return {c, where.theta};
    } catch (const InvalidInputError&) {
      continue;
    }
  }
  throw InvalidInputError("equilibrium: point does not lie on the level set");
}

}  // namespace

std::vector<double> gap_roots(const std::vector<double>& endpoints) {
  validate_endpoints(endpoints);
  const int k0 = static_cast<int>(endpoints.size()) / 2 - 1;
  if (k0 == 0) return {};

  PrecisionGuard guard(std::max(current_precision_bits(), 192u));
  const Real target = pow_real(Real(2), -Real(static_cast<int>(current_precision_bits())) / 2);

  // Moments of the gap weight: m[k][j] = integral over gap k of
  // t^j / sqrt(prod |t - a_j|) dt, j = 0..k0.
  auto moments_at = [&](int order) {
    std::vector<std::vector<Real>> m(k0, std::vector<Real>(k0 + 1, Real(0)));
    QuadratureRule gj = gauss_jacobi(order, Real(-0.5), Real(-0.5));
    for (int k = 0; k < k0; ++k) {
      Real g0(endpoints[2 * k + 1]), g1(endpoints[2 * k + 2]);
      Real mid = (g0 + g1) / 2, half = (g1 - g0) / 2;
      for (int i = 0; i < gj.order; ++i) {
        Real t = mid + half * gj.nodes[i];
        Real rest(1);
        for (std::size_t j = 0; j < endpoints.size(); ++j) {
          if (j == static_cast<std::size_t>(2 * k + 1) ||
              j == static_cast<std::size_t>(2 * k + 2))
            continue;
          rest *= abs(t - Real(endpoints[j]));
        }
        Real w = gj.weights[i] / sqrt(rest);
        Real tp(1);
        for (int jj = 0; jj <= k0; ++jj) {
          m[k][jj] += w * tp;
          tp *= t;
        }
      }
    }
    return m;
  };

  std::vector<std::vector<Real>> mom = moments_at(64);
  for (int order : {96, 128, 192, 256, 384}) {
    auto fine = moments_at(order);
    Real diff(0), scale(0);
    for (int k = 0; k < k0; ++k)
      for (int j = 0; j <= k0; ++j) {
        diff = std::max(diff, Real(abs(fine[k][j] - mom[k][j])));
        scale = std::max(scale, Real(abs(fine[k][j])));
      }
    mom = std::move(fine);
    if (scale > 0 && diff <= target * scale) break;
  }

  // Solve for the monic polynomial's coefficients: sum_j c_j m[k][j] = -m[k][k0].
  std::vector<std::vector<Real>> lhs(k0, std::vector<Real>(k0 + 1, Real(0)));
  for (int k = 0; k < k0; ++k) {
    for (int j = 0; j < k0; ++j) lhs[k][j] = mom[k][j];
    lhs[k][k0] = -mom[k][k0];
  }
  for (int col = 0; col < k0; ++col) {  // Gaussian elimination, partial pivoting
    int piv = col;
    for (int r = col + 1; r < k0; ++r)
      if (abs(lhs[r][col]) > abs(lhs[piv][col])) piv = r;
    if (!(abs(lhs[piv][col]) > 0)) throw Error("gap_roots: singular linear system");
    std::swap(lhs[col], lhs[piv]);
    for (int r = col + 1; r < k0; ++r) {
      Real factor = lhs[r][col] / lhs[col][col];
      for (int cc = col; cc <= k0; ++cc) lhs[r][cc] -= factor * lhs[col][cc];
    }
  }
  std::vector<Real> coeff(k0);
  for (int r = k0 - 1; r >= 0; --r) {
    Real acc = lhs[r][k0];
    for (int cc = r + 1; cc < k0; ++cc) acc -= lhs[r][cc] * coeff[cc];
    coeff[r] = acc / lhs[r][r];
  }

  auto poly = [&](const Real& t) {
    Real v(1);  // monic leading term, Horner downwards
    for (int j = k0 - 1; j >= 0; --j) v = v * t + coeff[j];
    return v;
  };

  // One root per gap, by bisection (sign change guaranteed: the k0 real roots
  // interlace the gaps).
  std::vector<double> roots;
  for (int k = 0; k < k0; ++k) {
    Real lo(endpoints[2 * k + 1]), hi(endpoints[2 * k + 2]);
    Real flo = poly(lo), fhi = poly(hi);
    if (!(flo * fhi < 0))
      throw Error("gap_roots: defining polynomial does not change sign across a gap");
    for (int iter = 0; iter < 2100 && hi - lo > target * (abs(lo) + abs(hi) + 1); ++iter) {
      Real mid = (lo + hi) / 2;
      Real fm = poly(mid);
      if (fm == 0) {
        lo = mid;
        hi = mid;
        break;
      }
      if (flo * fm < 0)
        hi = mid;
      else {
        lo = mid;
        flo = fm;
      }
    }
    roots.push_back(to_double((lo + hi) / 2));
  }
  return roots;
}

EquilibriumDensity::EquilibriumDensity(Shape shape) : shape_(std::move(shape)) {
  if (const auto* u = std::get_if<IntervalUnion>(&shape_)) {
    validate_endpoints(u->endpoints);
    const std::size_t k0 = u->endpoints.size() / 2 - 1;
    if (u->gap_roots.size() != k0)
      throw InvalidInputError("interval union needs exactly one gap root per gap");
    for (std::size_t k = 0; k < k0; ++k)
      if (!(u->endpoints[2 * k + 1] < u->gap_roots[k] && u->gap_roots[k] < u->endpoints[2 * k + 2]))
        throw InvalidInputError("gap root outside its gap");
  } else if (const auto* c = std::get_if<Circle>(&shape_)) {
    if (!(c->radius > 0)) throw InvalidInputError("circle radius must be positive");
  } else if (auto* l = std::get_if<LemniscateShape>(&shape_)) {
    if (l->T.degree() < 1) throw InvalidInputError("lemniscate polynomial must be non-constant");
    l->N = l->T.degree();
    if (!l->curve) l->curve = std::make_shared<const LemniscateCurve>(l->T);
  }
}

Real EquilibriumDensity::eval(const Complex& z) const {
  if (const auto* u = std::get_if<IntervalUnion>(&shape_)) {
    if (!(abs(z.im) <= Real(1e-9)))
      throw InvalidInputError("equilibrium: point not on the real support");
    return eval(z.re);
  }
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    if (!(abs(abs(z) - Real(c->radius)) <= Real(1e-6) * (1 + Real(c->radius))))
      throw InvalidInputError("equilibrium: point not on the circle");
    return 1 / (2 * const_pi() * Real(c->radius));
  }
  const auto& l = std::get<LemniscateShape>(shape_);
  Complex tz = l.T.eval(z);
  if (!(abs(abs(tz) - Real(1)) <= Real(1e-6)))
    throw InvalidInputError("equilibrium: point not on the level set");
  return abs(l.T.eval_derivative(z)) / (2 * const_pi() * l.N);
}

Real EquilibriumDensity::eval(const Real& x) const {
  const auto* u = std::get_if<IntervalUnion>(&shape_);
  if (!u) return eval(Complex(x));
  const auto& a = u->endpoints;
  const double xd = to_double(x);
  const double slack = 1e-12 * (1 + std::abs(xd));
  for (std::size_t i = 0; i < a.size() / 2; ++i) {
    if (xd < a[2 * i] - slack || xd > a[2 * i + 1] + slack) continue;
    Real A(a[2 * i]), B(a[2 * i + 1]);
    if (x == A || x == B) return Real(std::numeric_limits<double>::infinity());
    if (!(x > A && x < B)) return Real(std::numeric_limits<double>::infinity());
    return union_rest(a, u->gap_roots, static_cast<int>(i), x) / sqrt((x - A) * (B - x));
  }
  throw InvalidInputError("equilibrium: point not on the support");
}

Real EquilibriumDensity::mass_between(const Real& u, const Real& v, const Real& tol) const {
  if (const auto* iu = std::get_if<IntervalUnion>(&shape_)) {
    Real lo = u, hi = v;
    int sign = 1;
    if (hi < lo) {
      std::swap(lo, hi);
      sign = -1;
    }
    Real total(0);
    const auto& a = iu->endpoints;
    for (std::size_t i = 0; i < a.size() / 2; ++i) {
      Real p = lo, q = hi;
      if (p < Real(a[2 * i])) p = Real(a[2 * i]);
      if (q > Real(a[2 * i + 1])) q = Real(a[2 * i + 1]);
      if (p < q)
        total += piece_integral(a, iu->gap_roots, static_cast<int>(i), p, q,
                                [](const Real&) { return Real(1); }, tol);
    }
    return sign * total;
  }
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    (void)c;
    return (v - u) / (2 * const_pi());
  }
  const auto& l = std::get<LemniscateShape>(shape_);
  return (v - u) / (2 * const_pi() * l.N);
}

Real EquilibriumDensity::invert_mass(const Real& from, const Real& mass, const Real& tol) const {
  if (std::get_if<Circle>(&shape_)) return from + 2 * const_pi() * mass;
  if (const auto* l = std::get_if<LemniscateShape>(&shape_))
    return from + 2 * const_pi() * l->N * mass;

  const auto& iu = std::get<IntervalUnion>(shape_);
  const auto& a = iu.endpoints;
  const int pieces = static_cast<int>(a.size()) / 2;
  if (mass == 0) return from;
  const int dir = mass > 0 ? 1 : -1;
  Real remaining = abs(mass);

  // Snap the start into the support (gap starts jump to the next interval).
  Real cur = from;
  int i = -1;
  for (int k = 0; k < pieces; ++k) {
    if (to_double(cur) <= a[2 * k + 1] + 1e-15 && to_double(cur) >= a[2 * k] - 1e-15) {
      i = k;
      break;
    }
  }
  if (i < 0) {
    for (int k = 0; k < pieces; ++k) {
      int kk = dir > 0 ? k : pieces - 1 - k;
      if ((dir > 0 && a[2 * kk] >= to_double(cur)) || (dir < 0 && a[2 * kk + 1] <= to_double(cur))) {
        i = kk;
        cur = Real(dir > 0 ? a[2 * kk] : a[2 * kk + 1]);
        break;
      }
    }
    if (i < 0) throw InvalidInputError("invert_mass: start beyond the support");
  }

  auto ones = [](const Real&) { return Real(1); };
  while (true) {
    Real A(a[2 * i]), B(a[2 * i + 1]);
    Real lo = dir > 0 ? cur : A;
    Real hi = dir > 0 ? B : cur;
    Real cap = piece_integral(a, iu.gap_roots, i, lo, hi, ones, tol);
    if (cap + tol >= remaining) {
      // Solve within [lo, hi]: mass from cur towards dir equals remaining.
      auto mass_to = [&](const Real& x) {
        return dir > 0 ? piece_integral(a, iu.gap_roots, i, cur, x, ones, tol)
                       : piece_integral(a, iu.gap_roots, i, x, cur, ones, tol);
      };
      Real blo = dir > 0 ? cur : A, bhi = dir > 0 ? B : cur;
      // bisect a few rounds for a safe Newton seed
      Real x = (blo + bhi) / 2;
      for (int r = 0; r < 20; ++r) {
        Real m = mass_to(x);
        if (abs(m - remaining) <= tol) return x;
        if ((m < remaining) == (dir > 0))
          blo = x;
        else
          bhi = x;
        x = (blo + bhi) / 2;
      }
      for (int r = 0; r < 60; ++r) {
        Real m = mass_to(x);
        if (abs(m - remaining) <= tol) return x;
        Real w = eval(x);
        Real step = (remaining - m) / w * dir;
        Real cand = x + step;
        if (!(cand > blo && cand < bhi)) cand = (blo + bhi) / 2;
        if ((mass_to(cand) < remaining) == (dir > 0))
          blo = cand;
        else
          bhi = cand;
        x = cand;
      }
      return x;
    }
    remaining -= cap;
    i += dir;
    if (i < 0 || i >= pieces)
      throw InvalidInputError("invert_mass: requested mass exceeds the support");
    cur = Real(dir > 0 ? a[2 * i] : a[2 * i + 1]);
  }
}

Real EquilibriumDensity::cumulative(const Complex& ref, const Complex& z, const Real& tol) const {
  if (std::get_if<IntervalUnion>(&shape_)) {
    if (!(abs(ref.im) <= Real(1e-9) && abs(z.im) <= Real(1e-9)))
      throw InvalidInputError("equilibrium: cumulative endpoints must be real");
    return mass_between(ref.re, z.re, tol);
  }
  if (std::get_if<Circle>(&shape_)) {
    Real tr = atan2(ref.im, ref.re), tz = atan2(z.im, z.re);
    Real d = tz - tr;
    Real two_pi = 2 * const_pi();
    while (d < 0) d += two_pi;
    while (d >= two_pi) d -= two_pi;
    return d / two_pi;
  }
  const auto& l = std::get<LemniscateShape>(shape_);
  LocatedAngle lr = locate_on_level_set(l, ref.to_std());
  LocatedAngle lz = locate_on_level_set(l, z.to_std());
  if (lr.component != lz.component)
    throw InvalidInputError("equilibrium: cumulative across lemniscate components is undefined");
  double period = 2 * M_PI * l.curve->winding(lr.component);
  double d = lz.theta - lr.theta;
  while (d < 0) d += period;
  while (d >= period) d -= period;
  return Real(d) / (2 * const_pi() * l.N);
}

Real EquilibriumDensity::mass(const Real& tol) const {
  if (const auto* iu = std::get_if<IntervalUnion>(&shape_)) {
    Real total(0);
    const auto& a = iu->endpoints;
    for (std::size_t i = 0; i < a.size() / 2; ++i)
      total += piece_integral(a, iu->gap_roots, static_cast<int>(i), Real(a[2 * i]),
                              Real(a[2 * i + 1]), [](const Real&) { return Real(1); }, tol);
    return total;
  }
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    Real r(c->radius);
    auto f = [&](const Real& t) { return eval(Complex(r) * unit_phase(t)) * r; };
    return integrate_smooth(f, Real(0), 2 * const_pi(), tol);
  }
  const auto& l = std::get<LemniscateShape>(shape_);
  Real total(0);
  for (int comp = 0; comp < l.curve->component_count(); ++comp) {
    Parametrization par = parametrize(SupportComponent(Lemniscate{l.T, comp, l.curve}));
    auto f = [&](const Real& t) { return eval(par.point(t)) * abs(par.velocity(t)); };
    total += integrate_smooth(f, par.t0, par.t1, tol);
  }
  return total;
}

EquilibriumDensity density_intervals(const std::vector<double>& endpoints) {
  EquilibriumDensity::IntervalUnion u;
  u.endpoints = endpoints;
  u.gap_roots = gap_roots(endpoints);
  return EquilibriumDensity(EquilibriumDensity::Shape(std::move(u)));
}

Real endpoint_constant(const std::vector<double>& endpoints, double a) {
  validate_endpoints(endpoints);
  std::size_t j0 = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < endpoints.size(); ++j) {
    double d = std::abs(endpoints[j] - a);
    if (d < bestd) {
      bestd = d;
      j0 = j;
    }
  }
  if (bestd > 1e-12 * (1 + std::abs(a)))
    throw InvalidInputError("endpoint_constant: a must be one of the endpoints");

  std::vector<double> lam = gap_roots(endpoints);
  Real num(1);
  for (double l : lam) num *= abs(Real(a) - Real(l));
  Real den(1);
  for (std::size_t j = 0; j < endpoints.size(); ++j)
    if (j != j0) den *= abs(Real(a) - Real(endpoints[j]));
  return num / (const_pi() * sqrt(den));
}

EquilibriumDensity density_lemniscate(const ComplexPolynomial& T) {
  EquilibriumDensity::LemniscateShape s;
  s.T = T;
  s.N = T.degree();
  s.curve = std::make_shared<const LemniscateCurve>(T);  // validates the level set
  return EquilibriumDensity(EquilibriumDensity::Shape(std::move(s)));
}

}  // namespace ccf
