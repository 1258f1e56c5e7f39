#include "ccf/constructions.hpp"

#include "ccf/asymptotics.hpp"
#include "ccf/bessel.hpp"
#include "ccf/errors.hpp"
#include "ccf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

namespace ccf {

namespace {

using std::abs;
using std::sqrt;

const EquilibriumDensity::IntervalUnion& union_shape(const EquilibriumDensity& eq,
                                                     const char* who) {
  const auto* u = std::get_if<EquilibriumDensity::IntervalUnion>(&eq.shape());
  if (!u)
    throw UnsupportedGeometryError(std::string(who) +
                                   ": only interval-union supports are handled");
  return *u;
}

// Index of the interval [a_{2i}, a_{2i+1}] containing x strictly inside.
std::size_t interior_piece(const std::vector<double>& endpoints, double x, const char* who) {
  for (std::size_t i = 0; i + 1 < endpoints.size(); i += 2) {
    if (x > endpoints[i] && x < endpoints[i + 1]) return i / 2;
  }
  throw InvalidInputError(std::string(who) + ": z0 must lie strictly inside an interval");
}

Real real_part_of(const Complex& z, const char* who) {
  if (!(abs(z.im) <= Real(1e-12) * (1 + abs(z.re))))
    throw InvalidInputError(std::string(who) + ": point is not on the real support");
  return z.re;
}

// integral of t * omega(t) over [u, v] inside the single piece [A, B].
// Near an edge the density has an inverse-square-root factor; substituting
// t = edge -+ y^2 removes it, so plain smooth quadrature always applies.
Real piece_moment(const EquilibriumDensity& eq, const Real& A, const Real& B, const Real& u,
                  const Real& v, const Real& tol) {
  if (!(u < v)) return Real(0);
  Real width = v - u;
  bool near_left = (u - A) < 4 * width;
  bool near_right = (B - v) < 4 * width;
  if (near_left && near_right) {
    Real mid = (u + v) / 2;
    return piece_moment(eq, A, B, u, mid, tol) + piece_moment(eq, A, B, mid, v, tol);
  }
  if (near_left) {
    // t = A + y^2, dt = 2 y dy; y * omega(A + y^2) stays smooth at y = 0.
    auto f = [&](const Real& y) {
      Real t = A + y * y;
      return 2 * y * t * eq.eval(t);
    };
    return integrate_smooth(f, sqrt(u - A), sqrt(v - A), tol);
  }
  if (near_right) {
    auto f = [&](const Real& y) {
      Real t = B - y * y;
      return 2 * y * t * eq.eval(t);
    };
    return integrate_smooth(f, sqrt(B - v), sqrt(B - u), tol);
  }
  return integrate_smooth([&](const Real& t) { return t * eq.eval(t); }, u, v, tol);
}

// integral of t d nu over [u, v] intersected with the support.
Real nu_moment(const EquilibriumDensity& eq, const Real& u, const Real& v, const Real& tol) {
  const auto& shape = union_shape(eq, "nu_moment");
  Real total(0);
  for (std::size_t i = 0; i + 1 < shape.endpoints.size(); i += 2) {
    Real A(shape.endpoints[i]), B(shape.endpoints[i + 1]);
    Real lo = u > A ? u : A;
    Real hi = v < B ? v : B;
    if (lo < hi) total += piece_moment(eq, A, B, lo, hi, tol);
  }
  return total;
}

}  // namespace

double default_tau(double alpha) { return (15.5 + alpha) / (16.5 + alpha); }

BesselDivision bessel_division(const EquilibriumDensity& eq, const Complex& z0, int n,
                               double beta) {
  if (n < 1) throw InvalidInputError("bessel_division: need n >= 1");
  if (!(beta > -0.5)) throw InvalidInputError("bessel_division: need beta > -1/2");
  const auto& shape = union_shape(eq, "bessel_division");
  Real x0 = real_part_of(z0, "bessel_division");
  interior_piece(shape.endpoints, to_double(x0), "bessel_division");

  const Real tol("1e-13");
  const Real slack("1e-12");
  Real edge_left(shape.endpoints.front()), edge_right(shape.endpoints.back());
  Real cap_right = eq.mass_between(x0, edge_right, tol);
  Real cap_left = eq.mass_between(edge_left, x0, tol);
  Real pi_n = const_pi() * n;

  std::vector<Complex> right, left;
  for (int side : {+1, -1}) {
    Real cap = side > 0 ? cap_right : cap_left;
    std::vector<Complex>& out = side > 0 ? right : left;
    for (int k = 1;; ++k) {
      Real m = Real(bessel_zero(beta, k)) / pi_n;
      if (m > cap + slack) break;
      if (abs(m - cap) <= slack) {
        out.push_back(Complex(side > 0 ? edge_right : edge_left));
        break;
      }
      out.push_back(Complex(eq.invert_mass(x0, side > 0 ? m : -m)));
    }
  }

  BesselDivision div;
  div.points.assign(left.rbegin(), left.rend());
  div.zero_index = div.points.size();
  div.points.push_back(Complex(x0));
  div.points.insert(div.points.end(), right.begin(), right.end());
  return div;
}

EqualMassDivision equal_mass_division(const EquilibriumDensity& eq, const Complex& z0, int n) {
  if (n < 1) throw InvalidInputError("equal_mass_division: need n >= 1");
  const auto& shape = union_shape(eq, "equal_mass_division");
  Real x0 = real_part_of(z0, "equal_mass_division");
  interior_piece(shape.endpoints, to_double(x0), "equal_mass_division");

  const Real tol("1e-13");
  const Real slack("1e-12");
  Real edge_left(shape.endpoints.front()), edge_right(shape.endpoints.back());
  Real cap_right = eq.mass_between(x0, edge_right, tol);
  Real cap_left = eq.mass_between(edge_left, x0, tol);
  Real cell = Real(1) / n;

  // Centered cell: split the 1/n mass into s on the left of z0 and 1/n - s
  // on the right so that the cell's mass center lands on z0.
  auto cell_at = [&](const Real& s) {
    Real b0 = s > 0 ? eq.invert_mass(x0, -s) : x0;
    Real b1 = (cell - s) > 0 ? eq.invert_mass(x0, cell - s) : x0;
    return std::make_pair(b0, b1);
  };
  auto center_gap = [&](const Real& s) {
    auto [b0, b1] = cell_at(s);
    return nu_moment(eq, b0, b1, tol) / cell - x0;
  };
  Real s_lo = cell - cap_right > 0 ? cell - cap_right : Real(0);
  Real s_hi = cap_left < cell ? cap_left : cell;
  if (!(s_lo < s_hi) || !(center_gap(s_lo) >= 0) || !(center_gap(s_hi) <= 0))
    throw InvalidInputError(
        "equal_mass_division: z0 too close to the support edge for a centered cell");
  for (int i = 0; i < 48; ++i) {
    Real mid = (s_lo + s_hi) / 2;
    Real g = center_gap(mid);
    if (abs(g) <= Real("1e-14")) {
      s_lo = s_hi = mid;
      break;
    }
    (g > 0 ? s_lo : s_hi) = mid;
  }
  Real s_star = (s_lo + s_hi) / 2;
  auto [b0, b1] = cell_at(s_star);

  // Full cells of mass 1/n march outward from b1 and b0; any leftover mass
  // below 1/n becomes a remainder cell ending at the support edge.
  auto march = [&](const Real& from, const Real& avail, int dir) {
    std::vector<Real> pts;
    double full = std::floor(to_double((avail + slack) * n));
    int count = full < 0 ? 0 : static_cast<int>(full);
    for (int k = 1; k <= count; ++k) {
      Real m = cell * k;
      if (abs(m - avail) <= slack) {
        pts.push_back(dir > 0 ? edge_right : edge_left);
        return std::make_pair(pts, false);
      }
      pts.push_back(eq.invert_mass(from, dir > 0 ? m : -m));
    }
    Real leftover = avail - cell * count;
    if (leftover > slack) {
      pts.push_back(dir > 0 ? edge_right : edge_left);
      return std::make_pair(pts, true);
    }
    if (!pts.empty()) pts.back() = dir > 0 ? edge_right : edge_left;
    return std::make_pair(pts, false);
  };
  auto [right_pts, right_rem] = march(b1, cap_right - (cell - s_star), +1);
  auto [left_pts, left_rem] = march(b0, cap_left - s_star, -1);
  (void)right_rem;
  (void)left_rem;

  std::vector<Real> boundaries;
  boundaries.assign(left_pts.rbegin(), left_pts.rend());
  boundaries.push_back(b0);
  boundaries.push_back(b1);
  boundaries.insert(boundaries.end(), right_pts.begin(), right_pts.end());

  EqualMassDivision div;
  div.xi_zero = left_pts.size();
  for (const Real& b : boundaries) div.b_points.push_back(Complex(b));
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    Real m = eq.mass_between(boundaries[i], boundaries[i + 1], tol);
    if (!(m > 0))
      throw InvalidInputError("equal_mass_division: empty cell in the division");
    div.xi_points.push_back(Complex(nu_moment(eq, boundaries[i], boundaries[i + 1], tol) / m));
  }
  return div;
}

DivisionScheme make_scheme(const EquilibriumDensity& eq, const Complex& z0, int n, double alpha,
                           std::optional<double> tau) {
  if (!(alpha > -1)) throw InvalidInputError("make_scheme: need alpha > -1");
  double t = tau ? *tau : default_tau(alpha);
  if (!(t > 0 && t < 1)) throw InvalidInputError("make_scheme: need tau in (0,1)");

  DivisionScheme scheme;
  scheme.n = n;
  scheme.alpha = alpha;
  scheme.beta = (alpha + 1) / 2;
  scheme.tau = t;
  scheme.rho = (alpha + 9) * (1 - t);
  scheme.big_n = static_cast<int>(std::floor(std::pow(n, 3 * (1 - t))));
  scheme.z0 = z0;

  BesselDivision bd = bessel_division(eq, z0, n, scheme.beta);
  scheme.a_points = std::move(bd.points);
  scheme.a_zero = bd.zero_index;

  EqualMassDivision em = equal_mass_division(eq, z0, n);
  scheme.b_points = std::move(em.b_points);
  scheme.xi_points = std::move(em.xi_points);
  scheme.xi_zero = em.xi_zero;

  std::size_t nn = static_cast<std::size_t>(scheme.big_n);
  bool a_ok = scheme.a_zero >= nn && scheme.a_points.size() - 1 - scheme.a_zero >= nn;
  bool xi_ok = scheme.xi_zero > nn && scheme.xi_points.size() - 1 - scheme.xi_zero > nn;
  if (!a_ok || !xi_ok)
    throw InvalidInputError("make_scheme: n too small for tau (not enough division points)");
  return scheme;
}

namespace {

// Running product with explicit base-2 exponent so that magnitudes far
// outside double range cannot overflow the accumulator.
struct TrackedProduct {
  Complex value{Real(1)};
  long exp2 = 0;
  bool zero = false;
  int since = 0;

  void normalize() {
    Real m = abs(value.re) + abs(value.im);
    if (m == 0) {
      zero = true;
      return;
    }
    int e = 0;
    frexp(m, &e);
    value.re = ldexp(value.re, -e);
    value.im = ldexp(value.im, -e);
    exp2 += e;
  }

  void mul(const Complex& f) {
    if (zero) return;
    if (f.re == 0 && f.im == 0) {
      zero = true;
      return;
    }
    value = value * f;
    if (++since % 32 == 0) normalize();
  }

  Complex collapse() const {
    if (zero) return Complex(Real(0));
    int e = static_cast<int>(exp2);
    return Complex(ldexp(value.re, e), ldexp(value.im, e));
  }
};

}  // namespace

CnValue build_Cn(const DivisionScheme& scheme, const Complex& z) {
  Complex u = z - scheme.z0;
  std::size_t nn = static_cast<std::size_t>(scheme.big_n);

  TrackedProduct a;
  for (std::size_t k = 1; k <= nn; ++k) {
    a.mul(Complex(Real(1)) - u / (scheme.a_points[scheme.a_zero + k] - scheme.z0));
    a.mul(Complex(Real(1)) - u / (scheme.a_points[scheme.a_zero - k] - scheme.z0));
  }

  TrackedProduct b;
  for (std::size_t i = 0; i < scheme.xi_points.size(); ++i) {
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(scheme.xi_zero);
    if (k >= -static_cast<std::ptrdiff_t>(nn) && k <= static_cast<std::ptrdiff_t>(nn)) continue;
    b.mul(Complex(Real(1)) - u / (scheme.xi_points[i] - scheme.z0));
  }

  CnValue out;
  out.a = a.collapse();
  out.b = b.collapse();
  TrackedProduct c = a;
  c.value = a.value * b.value;
  c.exp2 = a.exp2 + b.exp2;
  c.zero = a.zero || b.zero;
  out.c = c.collapse();
  return out;
}

std::vector<LocalReport> verify_local_behavior(const PowerWeightMeasure& mu,
                                               const EquilibriumDensity& eq,
                                               const std::vector<int>& n_list,
                                               const LocalBehaviorConfig& cfg) {
  PrecisionGuard guard(160);
  const auto& shape = union_shape(eq, "verify_local_behavior");
  if (mu.z0_at_endpoint)
    throw InvalidInputError("verify_local_behavior: z0 must be an interior point");

  // The measure must be the same interval union the density describes.
  std::vector<double> mu_ends;
  for (const auto& comp : mu.components) {
    const auto* iv = std::get_if<RealInterval>(&comp);
    if (!iv)
      throw UnsupportedGeometryError(
          "verify_local_behavior: only interval-union supports are handled");
    mu_ends.push_back(iv->a);
    mu_ends.push_back(iv->b);
  }
  std::sort(mu_ends.begin(), mu_ends.end());
  if (mu_ends.size() != shape.endpoints.size())
    throw InvalidInputError("verify_local_behavior: measure and density supports differ");
  for (std::size_t i = 0; i < mu_ends.size(); ++i)
    if (std::abs(mu_ends[i] - shape.endpoints[i]) > 1e-12 * (1 + std::abs(mu_ends[i])))
      throw InvalidInputError("verify_local_behavior: measure and density supports differ");

  Complex z0 = singular_center(mu);
  Real x0 = real_part_of(z0, "verify_local_behavior");
  double x0d = to_double(x0);
  Real alpha(mu.alpha);
  Real w0 = mu.weight_at(z0);
  Real omega0 = eq.eval(x0);
  Real limit = predict_interior(w0, omega0, alpha).limit;
  double npw_base = to_double(const_pi() * omega0);  // times n gives the kernel scale

  std::vector<LocalReport> reports;
  for (int n : n_list) {
    DivisionScheme scheme = make_scheme(eq, z0, n, mu.alpha, cfg.tau);
    LocalReport rep;
    rep.n = n;
    rep.tau = scheme.tau;
    rep.rho = scheme.rho;
    rep.big_n = scheme.big_n;
    rep.limit_constant = to_double(limit);

    double h = std::pow(n, -scheme.tau);
    double npw = npw_base * n;
    double window = std::pow(n, -(1 + scheme.rho));

    // Scaled kernel zeros inside the window, for the exclusion test.
    std::vector<double> zero_offsets;
    for (int k = 1;; ++k) {
      double off = bessel_zero(scheme.beta, k) / npw;
      if (off > h + window) break;
      zero_offsets.push_back(off);
    }

    // Window samples: the part of each interval within distance h of z0.
    std::vector<double> near;
    for (std::size_t i = 0; i + 1 < shape.endpoints.size(); i += 2) {
      double lo = std::max(shape.endpoints[i], x0d - h);
      double hi = std::min(shape.endpoints[i + 1], x0d + h);
      if (lo >= hi) continue;
      int m = cfg.near_samples;
      for (int j = 0; j < m; ++j) near.push_back(lo + (hi - lo) * j / (m - 1));
    }

    for (double x : near) {
      CnValue val = build_Cn(scheme, Complex(Real(x)));
      double bdev = to_double(abs(val.b - Complex(Real(1))));
      rep.max_b_dev = std::max(rep.max_b_dev, bdev);
      rep.sup_c = std::max(rep.sup_c, to_double(abs(val.c)));

      double off = std::abs(x - x0d);
      bool excluded = false;
      for (double zo : zero_offsets)
        if (std::abs(off - zo) < window) excluded = true;
      if (!excluded) {
        double jc = kernel_jcal(scheme.beta, npw * (x - x0d));
        double adev = to_double(abs(val.a - Complex(Real(jc)))) / (1 + std::abs(jc));
        rep.max_a_dev = std::max(rep.max_a_dev, adev);
      }
    }

    // Support-wide samples for sup |C|.
    for (std::size_t i = 0; i + 1 < shape.endpoints.size(); i += 2) {
      double lo = shape.endpoints[i], hi = shape.endpoints[i + 1];
      int m = cfg.support_samples;
      for (int j = 0; j < m; ++j) {
        double x = lo + (hi - lo) * j / (m - 1);
        CnValue val = build_Cn(scheme, Complex(Real(x)));
        rep.sup_c = std::max(rep.sup_c, to_double(abs(val.c)));
      }
    }

    // Window integral of |C|^2 d mu, scaled by n^{alpha+1}.
    Real integral(0);
    Real tol(cfg.quad_tol);
    for (std::size_t i = 0; i + 1 < shape.endpoints.size(); i += 2) {
      Real lo(std::max(shape.endpoints[i], x0d - h));
      Real hi(std::min(shape.endpoints[i + 1], x0d + h));
      if (!(lo < hi)) continue;
      auto f = [&](const Real& t) {
        Complex zt(t);
        CnValue val = build_Cn(scheme, zt);
        return norm(val.c) * mu.weight_at(zt);
      };
      if (x0 >= lo && x0 <= hi) {
        integral += integrate_singular(f, lo, hi, x0, alpha, tol);
      } else {
        auto g = [&](const Real& t) { return f(t) * pow_real(abs(t - x0), alpha); };
        integral += integrate_smooth(g, lo, hi, tol);
      }
    }
    rep.scaled_integral = to_double(pow_real(Real(n), alpha + 1) * integral);
    rep.ratio = rep.scaled_integral / rep.limit_constant;
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace ccf
