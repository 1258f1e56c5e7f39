#include "ccf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace ccf {
namespace {

// Three-term recurrence coefficients of the monic Jacobi polynomials for the
// weight (1-x)^p(1+x)^q on [-1,1]:  pi_{k+1} = (x - a_k) pi_k - b_k pi_{k-1},
// with b_0 defined as the total weight 2^{p+q+1} B(p+1, q+1).
struct JacobiRecurrence {
  std::vector<Real> a;
  std::vector<Real> b;  // b[0] = mu0
};

JacobiRecurrence jacobi_recurrence(int n, const Real& p, const Real& q) {
  JacobiRecurrence r;
  r.a.resize(n);
  r.b.resize(n);
  Real s = p + q;
  // tgamma resolves to the MPFR-native overload for Real.
  r.b[0] = pow_real(Real(2), s + 1) * tgamma(p + 1) * tgamma(q + 1) / tgamma(s + 2);
  for (int k = 0; k < n; ++k) {
    if (k == 0)
      r.a[0] = (q - p) / (s + 2);
    else
      r.a[k] = (q * q - p * p) / ((2 * k + s) * (2 * k + s + 2));
    if (k == 1) {
      // The generic k>=1 formula has a removable 0/0 at p+q = -1; the factor
      // (k+p+q)/(2k+p+q-1) cancels identically at k=1.
      r.b[1] = 4 * (1 + p) * (1 + q) / ((2 + s) * (2 + s) * (3 + s));
    } else if (k >= 2) {
      r.b[k] = 4 * Real(k) * (k + p) * (k + q) * (k + s) /
               ((2 * k + s) * (2 * k + s) * (2 * k + s + 1) * (2 * k + s - 1));
    }
  }
  return r;
}

// Orthonormal-polynomial values p_hat_0..p_hat_n and the derivative of
// p_hat_n at x, from the recurrence (sqrt-normalized).
struct OrthonormalEval {
  Real value_n;
  Real deriv_n;
  Real kernel_sum_below_n;  // sum_{k<n} p_hat_k(x)^2  (Christoffel weight)
};

OrthonormalEval eval_orthonormal(const JacobiRecurrence& rec, const std::vector<Real>& sqrt_b,
                                 int n, const Real& x) {
  using std::sqrt;
  Real pm1(0), pm0 = 1 / sqrt_b[0];
  Real dm1(0), dm0(0);
  Real ksum = pm0 * pm0;
  for (int k = 0; k < n; ++k) {
    Real pk = ((x - rec.a[k]) * pm0 - (k > 0 ? sqrt_b[k] * pm1 : Real(0))) / sqrt_b[k + 1];
    Real dk = ((x - rec.a[k]) * dm0 + pm0 - (k > 0 ? sqrt_b[k] * dm1 : Real(0))) / sqrt_b[k + 1];
    pm1 = pm0;
    pm0 = pk;
    dm1 = dm0;
    dm0 = dk;
    if (k + 1 < n) ksum += pk * pk;
  }
  return {pm0, dm0, ksum};
}

// Double-precision scan/bisection giving seeds for the extended Newton.
std::vector<double> seed_nodes(int n, double p, double q) {
  // Recurrence in double.
  std::vector<double> a(n + 1), b(n + 2);
  double s = p + q;
  b[0] = 1.0;  // normalization irrelevant for roots
  a[0] = (q - p) / (s + 2);
  for (int k = 1; k <= n; ++k)
    a[k] = (q * q - p * p) / ((2 * k + s) * (2 * k + s + 2));
  b[1] = 4 * (1 + p) * (1 + q) / ((2 + s) * (2 + s) * (3 + s));
  for (int k = 2; k <= n + 1; ++k)
    b[k] = 4.0 * k * (k + p) * (k + q) * (k + s) /
           ((2 * k + s) * (2 * k + s) * (2 * k + s + 1) * (2 * k + s - 1));
  std::vector<double> sb(n + 2);
  for (int k = 0; k <= n + 1; ++k) sb[k] = std::sqrt(b[k]);

  auto pn = [&](double x) {
    double pm1 = 0, pm0 = 1.0;
    for (int k = 0; k < n; ++k) {
      double pk = ((x - a[k]) * pm0 - (k > 0 ? sb[k] * pm1 : 0.0)) / sb[k + 1];
      pm1 = pm0;
      pm0 = pk;
    }
    return pm0;
  };

  // Chebyshev-angle grid, refined until exactly n sign changes are bracketed.
  for (int grid = 8 * (n + 4);; grid *= 4) {
    if (grid > (1 << 22)) throw Error("gauss_jacobi: failed to bracket all nodes");
    std::vector<double> xs(grid + 1), vs(grid + 1);
    for (int i = 0; i <= grid; ++i) {
      xs[i] = -std::cos(M_PI * double(i) / grid);
      // nudge the exact endpoints inward: the weight may blow up there
      if (i == 0) xs[i] = -1.0 + 1e-14;
      if (i == grid) xs[i] = 1.0 - 1e-14;
      vs[i] = pn(xs[i]);
    }
    std::vector<std::pair<double, double>> brackets;
    for (int i = 0; i < grid; ++i)
      if ((vs[i] < 0) != (vs[i + 1] < 0)) brackets.emplace_back(xs[i], xs[i + 1]);
    if (static_cast<int>(brackets.size()) != n) continue;
    std::vector<double> roots;
    roots.reserve(n);
    for (auto [lo, hi] : brackets) {
      double flo = pn(lo);
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = pn(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    return roots;
  }
}

using RuleKey = std::tuple<int, unsigned, double, double>;
std::map<RuleKey, std::shared_ptr<const QuadratureRule>> g_rule_cache;
std::mutex g_rule_mutex;

}  // namespace

QuadratureRule gauss_jacobi(int order, const Real& p, const Real& q) {
  using std::abs;
  using std::sqrt;
  if (order < 1) throw InvalidInputError("gauss_jacobi: order must be >= 1");
  if (!(p > -1) || !(q > -1)) throw InvalidInputError("gauss_jacobi: exponents must be > -1");

  // Cache only exponents that round-trip through double (true for every use
  // in this library); keyed also by the active precision.
  const double pd = to_double(p), qd = to_double(q);
  const bool cacheable = (Real(pd) == p) && (Real(qd) == q);
  const unsigned digits = Real::default_precision();
  if (cacheable) {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rule_cache.find({order, digits, pd, qd});
    if (it != g_rule_cache.end()) return *it->second;
  }

  QuadratureRule rule;
  rule.order = order;
  rule.p = p;
  rule.q = q;

  JacobiRecurrence rec = jacobi_recurrence(order + 1, p, q);
  std::vector<Real> sqrt_b(rec.b.size());
  for (std::size_t k = 0; k < rec.b.size(); ++k) sqrt_b[k] = sqrt(rec.b[k]);

  if (order == 1) {
    rule.nodes = {rec.a[0]};
    rule.weights = {rec.b[0]};
  } else {
    std::vector<double> seeds = seed_nodes(order, pd, qd);
    const Real newton_tol = pow_real(Real(2), -Real(static_cast<long>(current_precision_bits())) + 6);
    rule.nodes.reserve(order);
    rule.weights.reserve(order);
    for (int i = 0; i < order; ++i) {
      Real x(seeds[i]);
      bool converged = false;
      for (int it = 0; it < 80; ++it) {
        OrthonormalEval ev = eval_orthonormal(rec, sqrt_b, order, x);
        Real step = ev.value_n / ev.deriv_n;
        x -= step;
        if (abs(step) <= newton_tol * (1 + abs(x))) {
          converged = true;
          break;
        }
      }
      if (!converged || !(x > -1) || !(x < 1))
        throw Error("gauss_jacobi: node solver did not converge at order " +
                    std::to_string(order));
      OrthonormalEval ev = eval_orthonormal(rec, sqrt_b, order, x);
      rule.nodes.push_back(x);
      rule.weights.push_back(1 / ev.kernel_sum_below_n);
    }
    for (int i = 0; i + 1 < order; ++i)
      if (!(rule.nodes[i] < rule.nodes[i + 1]))
        throw Error("gauss_jacobi: nodes not strictly increasing at order " +
                    std::to_string(order));
  }

  if (cacheable) {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    g_rule_cache[{order, digits, pd, qd}] = std::make_shared<const QuadratureRule>(rule);
  }
  return rule;
}

const QuadratureRule& gauss_legendre(int order) {
  const unsigned digits = Real::default_precision();
  {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rule_cache.find({order, digits, 0.0, 0.0});
    if (it != g_rule_cache.end()) return *it->second;
  }
  gauss_jacobi(order, Real(0), Real(0));  // populates the cache
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  return *g_rule_cache.at({order, digits, 0.0, 0.0});
}

namespace {

// One composite pass for integral_s^c f(x) (x-s)^alpha dx with the
// singularity at the left end: `shells` dyadic Gauss-Legendre panels plus a
// Gauss-Jacobi panel touching s.  Returns (integral, integral of |f|-weighted
// absolute values) for the tolerance scale.
std::pair<Real, Real> singular_side_pass(const std::function<Real(const Real&)>& f, const Real& s,
                                         const Real& c, const Real& alpha, bool mirrored,
                                         int order, int shells) {
  using std::abs;
  using std::pow;
  Real len = abs(c - s);
  Real sign = mirrored ? Real(-1) : Real(1);  // x = s + sign * u, u in (0, len]
  Real total(0), total_abs(0);

  // Innermost width len * 2^-shells.
  Real h = len;
  for (int j = 0; j < shells; ++j) h /= 2;

  // Gauss-Jacobi panel [0, h] in u: u = h(1+t)/2, weight u^alpha.
  {
    QuadratureRule gj = gauss_jacobi(order, Real(0), alpha);
    Real scale = pow_real(h / 2, alpha + 1);
    for (int i = 0; i < gj.order; ++i) {
      Real u = h * (1 + gj.nodes[i]) / 2;
      Real v = f(s + sign * u) * gj.weights[i];
      total += scale * v;
      total_abs += scale * abs(v);
    }
  }
  // Dyadic shells [h*2^j, h*2^{j+1}], j = 0..shells-1, Gauss-Legendre with
  // the algebraic weight folded into the integrand.
  const QuadratureRule& gl = gauss_legendre(order);
  Real lo = h;
  for (int j = 0; j < shells; ++j) {
    Real hi = (j + 1 == shells) ? len : lo * 2;
    Real mid = (lo + hi) / 2, half = (hi - lo) / 2;
    for (int i = 0; i < gl.order; ++i) {
      Real u = mid + half * gl.nodes[i];
      Real v = f(s + sign * u) * pow_real(u, alpha) * gl.weights[i] * half;
      total += v;
      total_abs += abs(v);
    }
    lo = hi;
  }
  return {total, total_abs};
}

Real integrate_singular_side(const std::function<Real(const Real&)>& f, const Real& s,
                             const Real& c, const Real& alpha, bool mirrored, const Real& tol) {
  using std::abs;
  Real prev(0), prev_abs(0);
  bool have_prev = false;
  int order = 24, shells = 18;
  for (int round = 0; round < 7; ++round) {
    auto [cur, cur_abs] = singular_side_pass(f, s, c, alpha, mirrored, order, shells);
    if (have_prev) {
      Real scale = cur_abs;
      if (scale < Real(1e-300)) scale = Real(1e-300);
      if (abs(cur - prev) <= tol * scale) return cur;
    }
    prev = cur;
    prev_abs = cur_abs;
    have_prev = true;
    order = order + order / 2 + 8;
    shells += 6;
  }
  auto [cur, cur_abs] = singular_side_pass(f, s, c, alpha, mirrored, order, shells);
  Real achieved = cur_abs > 0 ? abs(cur - prev) / cur_abs : abs(cur - prev);
  throw QuadratureError("integrate_singular: tolerance not reached", to_double(cur),
                        to_double(achieved));
}

}  // namespace

Real integrate_smooth(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                      const Real& tol) {
  using std::abs;
  if (!(a < b)) {
    if (a == b) return Real(0);
    throw InvalidInputError("integrate_smooth: need a <= b");
  }
  Real prev(0), best_gap(0);
  bool have_prev = false;
  int order = 16, panels = 2;
  for (int round = 0; round < 9; ++round) {
    const QuadratureRule& gl = gauss_legendre(order);
    Real cur(0), cur_abs(0);
    Real width = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
      Real mid = a + width * k + width / 2, half = width / 2;
      for (int i = 0; i < gl.order; ++i) {
        Real v = f(mid + half * gl.nodes[i]) * gl.weights[i] * half;
        cur += v;
        cur_abs += abs(v);
      }
    }
    if (have_prev) {
      Real scale = cur_abs;
      if (scale < Real(1e-300)) scale = Real(1e-300);
      Real gap = abs(cur - prev) / scale;
      if (gap <= tol) return cur;
      if (round == 1 || gap < best_gap) best_gap = gap;
    }
    prev = cur;
    have_prev = true;
    order = order + order / 2 + 4;
    panels *= 2;
  }
  throw QuadratureError("integrate_smooth: tolerance not reached", to_double(prev),
                        to_double(best_gap));
}

Real integrate_singular(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                        std::optional<Real> s, const Real& alpha, const Real& tol) {
  if (!(a < b)) {
    if (a == b) return Real(0);
    throw InvalidInputError("integrate_singular: need a <= b");
  }
  if (!s) return integrate_smooth(f, a, b, tol);
  if (*s < a || *s > b)
    throw InvalidInputError("integrate_singular: singular point outside the interval");
  if (!(alpha > -1)) throw InvalidInputError("integrate_singular: exponent must be > -1");

  Real result(0);
  if (*s > a) result += integrate_singular_side(f, *s, a, alpha, /*mirrored=*/true, tol);
  if (*s < b) result += integrate_singular_side(f, *s, b, alpha, /*mirrored=*/false, tol);
  return result;
}

Real integrate_arc(const SupportComponent& component, const std::function<Real(const Complex&)>& g,
                   const Real& tol) {
  Parametrization par = parametrize(component);
  auto integrand = [&](const Real& t) {
    Complex z = par.point(t);
    return g(z) * abs(par.velocity(t));
  };
  return integrate_smooth(integrand, par.t0, par.t1, tol);
}

Real component_length(const SupportComponent& c, const Real& tol) {
  return integrate_arc(c, [](const Complex&) { return Real(1); }, tol);
}

}  // namespace ccf
