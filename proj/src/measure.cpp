#include "ccf/measure.hpp"

#include "ccf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iterator>
#include <utility>

namespace ccf {
namespace {

bool all_real_intervals(const std::vector<SupportComponent>& cs) {
  for (const auto& c : cs)
    if (!std::holds_alternative<RealInterval>(c)) return false;
  return !cs.empty();
}

// True when every component is a circular arc of one common circle; such a
// union shares the angle coordinate, so its Fourier moments simply add and
// the Gram matrix keeps its Toeplitz form in the Laurent basis.
bool concentric_arcs(const std::vector<SupportComponent>& cs, Cd* center, double* radius) {
  if (cs.empty()) return false;
  const auto* first = std::get_if<CircularArc>(&cs[0]);
  if (!first) return false;
  for (const auto& c : cs) {
    const auto* arc = std::get_if<CircularArc>(&c);
    if (!arc || arc->center != first->center || arc->radius != first->radius) return false;
  }
  if (center) *center = first->center;
  if (radius) *radius = first->radius;
  return true;
}

// Panel order menu for oscillatory tables: the smallest order K whose
// Gauss-Legendre error on a panel with phase span <= 32 stays below 2^{-3p/4}
// (error ~ (span/4K)^{2K}).
int panel_order_for_bits(unsigned bits, int bump = 0) {
  static const int menu[] = {48, 64, 96, 128, 192, 256, 384, 512, 768, 1024, 1536, 2048};
  const double need = 0.52 * bits + 30;
  int idx = 0;
  for (; idx < static_cast<int>(std::size(menu)) - 1; ++idx) {
    double k = menu[idx];
    if (2 * k * std::log(k / 21.7) >= need) break;
  }
  idx = std::min(idx + bump, static_cast<int>(std::size(menu)) - 1);
  return menu[idx];
}

// Measure-weighted quadrature nodes along one parametrized component.
struct NodeSet {
  std::vector<Real> t;
  std::vector<Complex> z;
  std::vector<Real> weight;  // full d(mu) node weight, incl. w(z)|z-z0|^alpha
};

// Appends nodes covering [lo, hi] of the given parametrization.  If t0 is
// present it must be an endpoint of [lo, hi] or interior; the |z-z0|^alpha
// factor is then absorbed by a Gauss-Jacobi panel touching t0 on each side
// (exactly in the |t-t0|^alpha part, pointwise in the smooth remainder).
// Panels are kept below max_width; K is the per-panel order.
void add_param_nodes(NodeSet& out, const Parametrization& par, const PowerWeightMeasure& mu,
                     const Real& lo, const Real& hi, std::optional<Real> t0, double max_width,
                     int K) {
  using std::abs;
  using std::ceil;
  const Real alpha(mu.alpha);
  const Complex z0 = singular_center(mu);

  auto smooth_part = [&](const Real& t) {
    Complex z = par.point(t);
    return std::pair<Complex, Real>(z, mu.weight_at(z) * abs(par.velocity(t)));
  };

  // One side [s, s + len*dir] with the singularity at s (dir = +-1).
  auto add_side = [&](const Real& s, const Real& len, int dir) {
    if (!(len > 0)) return;
    int panels = std::max(1, static_cast<int>(std::ceil(to_double(len) / max_width)));
    Real h = len / panels;
    // innermost panel: Gauss-Jacobi in u = |t - s|
    {
      QuadratureRule gj = gauss_jacobi(K, Real(0), alpha);
      Real scale = pow_real(h / 2, alpha + 1);
      for (int i = 0; i < gj.order; ++i) {
        Real u = h * (1 + gj.nodes[i]) / 2;
        Real t = s + dir * u;
        auto [z, g] = smooth_part(t);
        Real ratio = abs(z - z0) / u;  // -> |velocity| at s; smooth
        out.t.push_back(t);
        out.z.push_back(z);
        out.weight.push_back(scale * gj.weights[i] * g * pow_real(ratio, alpha));
      }
    }
    const QuadratureRule& gl = gauss_legendre(K);
    for (int pnl = 1; pnl < panels; ++pnl) {
      Real plo = s + dir * (h * pnl), mid = plo + dir * h / 2;
      for (int i = 0; i < gl.order; ++i) {
        Real t = mid + dir * (h / 2) * gl.nodes[i];
        auto [z, g] = smooth_part(t);
        out.t.push_back(t);
        out.z.push_back(z);
        out.weight.push_back((h / 2) * gl.weights[i] * g * pow_real(abs(z - z0), alpha));
      }
    }
  };

  if (t0 && mu.alpha != 0) {
    add_side(*t0, *t0 - lo, -1);
    add_side(*t0, hi - *t0, +1);
    return;
  }

  // No singularity on this stretch: plain Gauss-Legendre panels, with the
  // (smooth here) |z-z0|^alpha factor evaluated pointwise.
  int panels = std::max(1, static_cast<int>(std::ceil(to_double(hi - lo) / max_width)));
  Real h = (hi - lo) / panels;
  const QuadratureRule& gl = gauss_legendre(K);
  for (int pnl = 0; pnl < panels; ++pnl) {
    Real mid = lo + h * pnl + h / 2;
    for (int i = 0; i < gl.order; ++i) {
      Real t = mid + (h / 2) * gl.nodes[i];
      auto [z, g] = smooth_part(t);
      Real sing = mu.alpha == 0 ? Real(1) : pow_real(abs(z - z0), Real(mu.alpha));
      out.t.push_back(t);
      out.z.push_back(z);
      out.weight.push_back((h / 2) * gl.weights[i] * g * sing);
    }
  }
}

// Node set for one component; the domain of a closed curve is re-centered on
// the singular parameter so the split point is interior.
NodeSet component_nodes(const PowerWeightMeasure& mu, int ci, double max_width, int K) {
  NodeSet out;
  Parametrization par = parametrize(mu.components[ci]);
  bool has_z0 = (ci == mu.z0_component);
  if (has_z0 && par.closed) {
    Real t0(mu.z0_param);
    Real half = (par.t1 - par.t0) / 2;
    add_param_nodes(out, par, mu, t0 - half, t0 + half, t0, max_width, K);
  } else if (has_z0) {
    add_param_nodes(out, par, mu, par.t0, par.t1, Real(mu.z0_param), max_width, K);
  } else {
    add_param_nodes(out, par, mu, par.t0, par.t1, std::nullopt, max_width, K);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table accumulators
// ---------------------------------------------------------------------------

// Modified Chebyshev moments M_m = integral of T_m((2x - A - B)/(B - A)) dmu,
// m = 0..m_max, over all (real) components.
std::vector<Real> chebyshev_moment_table(const PowerWeightMeasure& mu, double A, double B,
                                         int m_max, int K) {
  std::vector<Real> m_table(m_max + 1, Real(0));
  Real ar(A), br(B);
  for (std::size_t ci = 0; ci < mu.components.size(); ++ci) {
    NodeSet nodes = component_nodes(mu, static_cast<int>(ci), 1e300, K);
    for (std::size_t i = 0; i < nodes.t.size(); ++i) {
      const Real& wq = nodes.weight[i];
      Real xi = (2 * nodes.t[i] - ar - br) / (br - ar);
      Real tm1(1), tm0 = xi;
      m_table[0] += wq;
      if (m_max >= 1) m_table[1] += wq * xi;
      for (int m = 2; m <= m_max; ++m) {
        Real tm = 2 * xi * tm0 - tm1;
        m_table[m] += wq * tm;
        tm1 = tm0;
        tm0 = tm;
      }
    }
  }
  return m_table;
}

// Raw moments mu_m = integral of x^m dmu (real supports).
std::vector<Real> raw_moment_table(const PowerWeightMeasure& mu, int m_max, int K) {
  std::vector<Real> m_table(m_max + 1, Real(0));
  for (std::size_t ci = 0; ci < mu.components.size(); ++ci) {
    NodeSet nodes = component_nodes(mu, static_cast<int>(ci), 1e300, K);
    for (std::size_t i = 0; i < nodes.t.size(); ++i) {
      Real p(1);
      m_table[0] += nodes.weight[i];
      for (int m = 1; m <= m_max; ++m) {
        p *= nodes.t[i];
        m_table[m] += nodes.weight[i] * p;
      }
    }
  }
  return m_table;
}

// Fourier moments c_m = integral of e^{i m t} dmu(z(t)), m = 0..m_max, for a
// circle/arc parametrized by angle t.
std::vector<Complex> fourier_moment_table(const PowerWeightMeasure& mu, int m_max, int K) {
  double max_width = 32.0 / std::max(m_max, 1);
  std::vector<Complex> c(m_max + 1, Complex(Real(0)));
  for (std::size_t ci = 0; ci < mu.components.size(); ++ci) {
    NodeSet nodes = component_nodes(mu, static_cast<int>(ci), max_width, K);
    for (std::size_t i = 0; i < nodes.t.size(); ++i) {
      Complex phase = unit_phase(nodes.t[i]);
      Complex e(Real(1));
      c[0] += Complex(nodes.weight[i]);
      for (int m = 1; m <= m_max; ++m) {
        e *= phase;
        c[m] += nodes.weight[i] * e;
      }
    }
  }
  return c;
}

// Lemniscate block tables F[(j,jp)][d] = integral z^j conj(z)^{jp} e^{i d
// theta} dmu, j,jp < N, d = 0..D, where T(z(theta)) = e^{i theta}.
struct LemniscateTables {
  int block = 0;  // N
  int dmax = 0;   // D
  std::vector<Complex> f;  // indexed [(j*N + jp)*(D+1) + d]
  const Complex& at(int j, int jp, int d) const { return f[(j * block + jp) * (dmax + 1) + d]; }
};

LemniscateTables lemniscate_table(const PowerWeightMeasure& mu, int n, int K) {
  const auto& lem = std::get<Lemniscate>(mu.components[0]);
  const int deg = lem.T.degree();
  LemniscateTables tab;
  tab.block = deg;
  tab.dmax = n / deg;
  tab.f.assign(static_cast<std::size_t>(deg) * deg * (tab.dmax + 1), Complex(Real(0)));

  double f_max = tab.dmax + 2.0;
  double max_width = 32.0 / f_max;
  NodeSet nodes = component_nodes(mu, 0, max_width, K);

  std::vector<Complex> zp(deg), zcp(deg), ep(tab.dmax + 1);
  for (std::size_t i = 0; i < nodes.t.size(); ++i) {
    const Complex& z = nodes.z[i];
    zp[0] = Complex(Real(1));
    zcp[0] = Complex(Real(1));
    for (int j = 1; j < deg; ++j) {
      zp[j] = zp[j - 1] * z;
      zcp[j] = conj(zp[j]);
    }
    Complex phase = unit_phase(nodes.t[i]);
    ep[0] = Complex(nodes.weight[i]);
    for (int d = 1; d <= tab.dmax; ++d) ep[d] = ep[d - 1] * phase;
    for (int j = 0; j < deg; ++j)
      for (int jp = 0; jp < deg; ++jp) {
        Complex base = zp[j] * zcp[jp];
        for (int d = 0; d <= tab.dmax; ++d)
          tab.f[(j * deg + jp) * (tab.dmax + 1) + d] += base * ep[d];
      }
  }
  return tab;
}

Real table_diff(const std::vector<Real>& a, const std::vector<Real>& b) {
  using std::abs;
  Real num(0), den(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Real d = abs(a[i] - b[i]);
    if (d > num) num = d;
    Real m = abs(b[i]);
    if (m > den) den = m;
  }
  return den > 0 ? Real(num / den) : num;
}

Real table_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Real num(0), den(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Real d = abs(a[i] - b[i]);
    if (d > num) num = d;
    Real m = abs(b[i]);
    if (m > den) den = m;
  }
  return den > 0 ? Real(num / den) : num;
}

// Runs builder at increasing resolutions until two successive tables agree
// to `target` (relative to the largest entry); returns the finer table and
// stores the achieved agreement.
template <class Table>
Table validated_table(const std::function<Table(int)>& builder, unsigned bits, const Real& target,
                      double* achieved, const char* what) {
  Table coarse = builder(0);
  double best = 1e300;
  for (int bump = 1; bump <= 5; ++bump) {
    Table fine = builder(bump);
    Real diff = table_diff(coarse, fine);
    if (std::getenv("CCF_TRACE_TABLES"))
      std::fprintf(stderr, "[table %s bits=%u bump=%d] diff=%.3e target=%.3e\n", what, bits, bump,
                   to_double(diff), to_double(target));
    if (diff <= target) {
      *achieved = to_double(diff);
      return fine;
    }
    best = std::min(best, to_double(diff));
    coarse = std::move(fine);
  }
  char msg[256];
  std::snprintf(msg, sizeof(msg),
                "gram: quadrature for %s did not stabilize at precision %u "
                "(best agreement %.3e, needed %.3e)",
                what, bits, best, to_double(target));
  throw QuadratureError(msg, to_double(target), best);
}

template <class Table, class F>
Table validated(F&& builder, unsigned bits, const Real& target, double* achieved,
                const char* what) {
  std::function<Table(int)> fn = std::forward<F>(builder);
  return validated_table<Table>(fn, bits, target, achieved, what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Measure construction and mass
// ---------------------------------------------------------------------------

PowerWeightMeasure make_measure(std::vector<SupportComponent> components, Cd z0, double alpha,
                                std::function<Real(const Complex&)> w, std::string label) {
  if (components.empty()) throw InvalidInputError("make_measure: no support components");
  if (!(alpha > -1)) throw InvalidInputError("make_measure: alpha must be > -1");

  PowerWeightMeasure mu;
  mu.components.reserve(components.size());
  for (auto& c : components) mu.components.push_back(make_component(std::move(c)));
  mu.z0 = z0;
  mu.alpha = alpha;
  mu.w = std::move(w);
  mu.label = std::move(label);

  // Locate z0 on the support (closest component wins).
  double best = 1e300;
  for (std::size_t ci = 0; ci < mu.components.size(); ++ci) {
    PointLocation loc = locate_point(mu.components[ci], z0, 1e-9);
    if (!loc.on_component) continue;
    double dist = std::abs(loc.snapped.to_std() - z0);
    if (dist < best) {
      best = dist;
      mu.z0_component = static_cast<int>(ci);
      mu.z0_at_endpoint = loc.at_endpoint;
      mu.z0_param = to_double(loc.t);
      mu.z0_snapped = loc.snapped.to_std();
    }
  }
  if (mu.z0_component < 0 || best > 1e-12)
    throw InvalidInputError("make_measure: z0 does not lie on the support");

  // Spot-check strict positivity of the weight at interior sample points.
  // (Component endpoints are excluded: a weight may vanish at isolated
  // boundary points without affecting the measure.)
  for (const auto& c : mu.components) {
    Parametrization par = parametrize(c);
    for (int i = 0; i < 9; ++i) {
      Real t = par.t0 + (par.t1 - par.t0) * (2 * i + 1) / 18;
      if (!(mu.weight_at(par.point(t)) > 0))
        throw InvalidInputError("make_measure: weight not strictly positive on the support");
    }
  }
  return mu;
}

Complex singular_center(const PowerWeightMeasure& mu) {
  if (mu.z0_component < 0) return Complex(mu.z0_snapped);
  Parametrization par = parametrize(mu.components[mu.z0_component]);
  return par.point(Real(mu.z0_param));
}

Real total_mass(const PowerWeightMeasure& mu, const Real& tol) {
  using std::abs;
  Real alpha(mu.alpha);
  Complex z0 = singular_center(mu);
  Real sum(0);
  for (std::size_t ci = 0; ci < mu.components.size(); ++ci) {
    Parametrization par = parametrize(mu.components[ci]);
    if (static_cast<int>(ci) == mu.z0_component && mu.alpha != 0) {
      Real t0(mu.z0_param);
      Real lo = par.t0, hi = par.t1;
      if (par.closed) {
        Real half = (par.t1 - par.t0) / 2;
        lo = t0 - half;
        hi = t0 + half;
      }
      auto f = [&](const Real& t) {
        Complex z = par.point(t);
        Real ratio = abs(z - z0) / abs(t - t0);
        return mu.weight_at(z) * abs(par.velocity(t)) * pow_real(ratio, alpha);
      };
      sum += integrate_singular(f, lo, hi, t0, alpha, tol);
    } else {
      auto f = [&](const Real& t) {
        Complex z = par.point(t);
        Real sing = mu.alpha == 0 ? Real(1) : pow_real(abs(z - z0), alpha);
        return mu.weight_at(z) * abs(par.velocity(t)) * sing;
      };
      sum += integrate_smooth(f, par.t0, par.t1, tol);
    }
  }
  if (!(sum > 0)) throw InvalidInputError("total_mass: measure has non-positive mass");
  return sum;
}

GramBasis default_basis(const PowerWeightMeasure& mu) {
  if (all_real_intervals(mu.components)) return GramBasis::chebyshev_mapped;
  if (mu.components.size() == 1 && (std::holds_alternative<UnitCircle>(mu.components[0]) ||
                                    std::holds_alternative<Lemniscate>(mu.components[0])))
    return GramBasis::laurent_symmetrized;
  if (concentric_arcs(mu.components, nullptr, nullptr)) return GramBasis::laurent_symmetrized;
  return GramBasis::monomial;
}

// ---------------------------------------------------------------------------
// Gram assembly
// ---------------------------------------------------------------------------

namespace {

GramSystem gram_real_support(const PowerWeightMeasure& mu, int n, GramBasis basis, unsigned bits) {
  GramSystem sys;
  sys.n = n;
  sys.basis = basis;
  sys.precision_bits = bits;
  sys.entries = SquareMatrix<Complex>(n + 1);

  double hull_a = 1e300, hull_b = -1e300;
  for (const auto& c : mu.components) {
    const auto& iv = std::get<RealInterval>(c);
    hull_a = std::min(hull_a, iv.a);
    hull_b = std::max(hull_b, iv.b);
  }

  const Real target = pow_real(Real(2), -Real(3) * static_cast<int>(bits) / 4);
  const int m_max = 2 * n;

  if (basis == GramBasis::chebyshev_mapped) {
    auto table = validated<std::vector<Real>>(
        [&](int bump) {
          int K = n + 1 + 24 * (1 << bump);
          return chebyshev_moment_table(mu, hull_a, hull_b, m_max, K);
        },
        bits, target, &sys.quad_tol, "chebyshev moments");
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= j; ++k) {
        Real v = (table[j + k] + table[j - k]) / 2;
        sys.entries(j, k) = Complex(v);
        sys.entries(k, j) = Complex(v);
      }
    double a = hull_a, b = hull_b;
    sys.basis_eval = [a, b, n](const Complex& z) {
      Real ar(a), br(b);
      std::vector<Complex> out(n + 1);
      Complex xi = (2 * z - Complex(ar + br)) / (br - ar);
      out[0] = Complex(Real(1));
      if (n >= 1) out[1] = xi;
      for (int j = 2; j <= n; ++j) out[j] = 2 * (xi * out[j - 1]) - out[j - 2];
      return out;
    };
  } else {  // monomial
    auto table = validated<std::vector<Real>>(
        [&](int bump) {
          int K = n + 1 + 24 * (1 << bump);
          return raw_moment_table(mu, m_max, K);
        },
        bits, target, &sys.quad_tol, "raw moments");
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= j; ++k) {
        sys.entries(j, k) = Complex(table[j + k]);
        sys.entries(k, j) = Complex(table[j + k]);
      }
    sys.basis_eval = [n](const Complex& z) {
      std::vector<Complex> out(n + 1);
      out[0] = Complex(Real(1));
      for (int j = 1; j <= n; ++j) out[j] = out[j - 1] * z;
      return out;
    };
  }
  return sys;
}

GramSystem gram_circle_arc(const PowerWeightMeasure& mu, int n, GramBasis basis, unsigned bits) {
  GramSystem sys;
  sys.n = n;
  sys.basis = basis;
  sys.precision_bits = bits;
  sys.entries = SquareMatrix<Complex>(n + 1);

  Cd center(0.0, 0.0);
  double radius = 1.0;
  concentric_arcs(mu.components, &center, &radius);

  const Real target = pow_real(Real(2), -Real(3) * static_cast<int>(bits) / 4);
  auto table = validated<std::vector<Complex>>(
      [&](int bump) { return fourier_moment_table(mu, n, panel_order_for_bits(bits, bump)); },
      bits, target, &sys.quad_tol, "fourier moments");

  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= j; ++k) {
      Complex v = table[j - k];
      if (j == k) v.im = Real(0);
      sys.entries(j, k) = v;
      sys.entries(k, j) = conj(v);
    }
  sys.basis_eval = [center, radius, n](const Complex& z) {
    std::vector<Complex> out(n + 1);
    Complex zeta = (z - Complex(center)) / Real(radius);
    out[0] = Complex(Real(1));
    for (int j = 1; j <= n; ++j) out[j] = out[j - 1] * zeta;
    return out;
  };
  return sys;
}

GramSystem gram_lemniscate(const PowerWeightMeasure& mu, int n, unsigned bits) {
  GramSystem sys;
  sys.n = n;
  sys.basis = GramBasis::laurent_symmetrized;
  sys.precision_bits = bits;
  sys.entries = SquareMatrix<Complex>(n + 1);

  const auto& lem = std::get<Lemniscate>(mu.components[0]);
  const int deg = lem.T.degree();

  const Real target = pow_real(Real(2), -Real(3) * static_cast<int>(bits) / 4);
  LemniscateTables coarse = lemniscate_table(mu, n, panel_order_for_bits(bits, 0));
  bool settled = false;
  double best = 1e300;
  for (int bump = 1; bump <= 5 && !settled; ++bump) {
    LemniscateTables fine = lemniscate_table(mu, n, panel_order_for_bits(bits, bump));
    Real diff = table_diff(coarse.f, fine.f);
    if (diff <= target) {
      sys.quad_tol = to_double(diff);
      settled = true;
    }
    best = std::min(best, to_double(diff));
    coarse = std::move(fine);
  }
  if (!settled) {
    char msg[256];
    std::snprintf(msg, sizeof(msg),
                  "gram: lemniscate table did not stabilize at precision %u "
                  "(best agreement %.3e, needed %.3e)",
                  bits, best, to_double(target));
    throw QuadratureError(msg, to_double(target), best);
  }

  auto entry = [&](int row, int col) {
    int m = row / deg, j = row % deg;
    int mp = col / deg, jp = col % deg;
    int d = m - mp;
    if (d >= 0) return coarse.at(j, jp, d);
    return conj(coarse.at(jp, j, -d));
  };
  for (int row = 0; row <= n; ++row)
    for (int col = 0; col <= row; ++col) {
      Complex v = entry(row, col);
      if (row == col) v.im = Real(0);
      sys.entries(row, col) = v;
      sys.entries(col, row) = conj(v);
    }

  ComplexPolynomial t_poly = lem.T;
  sys.basis_eval = [t_poly, deg, n](const Complex& z) {
    std::vector<Complex> out(n + 1);
    std::vector<Complex> zp(deg);
    zp[0] = Complex(Real(1));
    for (int j = 1; j < deg; ++j) zp[j] = zp[j - 1] * z;
    Complex tz = t_poly.eval(z);
    Complex tm(Real(1));
    for (int k = 0; k <= n; ++k) {
      int m = k / deg, j = k % deg;
      if (j == 0 && m > 0) tm *= tz;
      out[k] = zp[j] * tm;
    }
    return out;
  };
  return sys;
}

GramSystem gram_parametric(const PowerWeightMeasure& mu, int n, unsigned bits) {
  GramSystem sys;
  sys.n = n;
  sys.basis = GramBasis::monomial;
  sys.precision_bits = bits;
  sys.entries = SquareMatrix<Complex>(n + 1);

  Parametrization par = parametrize(mu.components[0]);
  Real alpha(mu.alpha);
  Complex z0 = singular_center(mu);
  Real tol = pow_real(Real(2), -Real(3) * static_cast<int>(bits) / 4);
  sys.quad_tol = to_double(tol);
  bool singular = (mu.z0_component == 0) && mu.alpha != 0;
  Real t0(mu.z0_param);

  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= j; ++k) {
      auto core = [&](const Real& t) {
        Complex z = par.point(t);
        std::vector<Complex> pows(std::max(j, k) + 1);
        pows[0] = Complex(Real(1));
        for (int m = 1; m <= std::max(j, k); ++m) pows[m] = pows[m - 1] * z;
        Complex prod = pows[j] * conj(pows[k]);
        return std::pair<Complex, Real>(prod, mu.weight_at(z) * abs(par.velocity(t)));
      };
      Complex acc(Real(0));
      for (int part = 0; part < 2; ++part) {
        bool re_part = part == 0;
        auto f = [&](const Real& t) {
          auto [prod, g] = core(t);
          Real base = re_part ? prod.re : prod.im;
          if (!singular) {
            Real sing = mu.alpha == 0 ? Real(1) : pow_real(abs(par.point(t) - z0), alpha);
            return base * g * sing;
          }
          Real ratio = abs(par.point(t) - z0) / abs(t - t0);
          return base * g * pow_real(ratio, alpha);
        };
        Real v = singular ? integrate_singular(f, par.t0, par.t1, t0, alpha, tol)
                          : integrate_smooth(f, par.t0, par.t1, tol);
        if (re_part)
          acc.re = v;
        else
          acc.im = v;
      }
      if (j == k) acc.im = Real(0);
      sys.entries(j, k) = acc;
      sys.entries(k, j) = conj(acc);
    }
  sys.basis_eval = [n](const Complex& z) {
    std::vector<Complex> out(n + 1);
    out[0] = Complex(Real(1));
    for (int j = 1; j <= n; ++j) out[j] = out[j - 1] * z;
    return out;
  };
  return sys;
}

}  // namespace

GramSystem gram(const PowerWeightMeasure& mu, int n, GramBasis basis, unsigned precision_bits) {
  if (n < 0) throw InvalidInputError("gram: n must be >= 0");
  if (precision_bits < 64) throw InvalidInputError("gram: precision_bits must be >= 64");
  PrecisionGuard guard(precision_bits);

  if (all_real_intervals(mu.components)) {
    if (basis == GramBasis::laurent_symmetrized)
      throw UnsupportedGeometryError("gram: laurent basis is not defined on real supports");
    return gram_real_support(mu, n, basis, precision_bits);
  }
  if (mu.components.size() != 1) {
    if (concentric_arcs(mu.components, nullptr, nullptr)) {
      if (basis != GramBasis::laurent_symmetrized)
        throw UnsupportedGeometryError("gram: circular arcs require the laurent basis");
      return gram_circle_arc(mu, n, basis, precision_bits);
    }
    throw UnsupportedGeometryError(
        "gram: unions are supported only when every component is a real interval "
        "or every component is an arc of one common circle");
  }

  const SupportComponent& c = mu.components[0];
  if (std::holds_alternative<UnitCircle>(c)) {
    // On the unit circle the monomial and laurent bases coincide.
    if (basis == GramBasis::chebyshev_mapped)
      throw UnsupportedGeometryError("gram: chebyshev basis needs a real support");
    return gram_circle_arc(mu, n, basis, precision_bits);
  }
  if (std::holds_alternative<CircularArc>(c)) {
    if (basis != GramBasis::laurent_symmetrized)
      throw UnsupportedGeometryError("gram: circular arcs require the laurent basis");
    return gram_circle_arc(mu, n, basis, precision_bits);
  }
  if (std::holds_alternative<Lemniscate>(c)) {
    if (basis != GramBasis::laurent_symmetrized)
      throw UnsupportedGeometryError("gram: lemniscates require the laurent basis");
    return gram_lemniscate(mu, n, precision_bits);
  }
  if (basis != GramBasis::monomial)
    throw UnsupportedGeometryError("gram: parametric arcs support only the monomial basis");
  return gram_parametric(mu, n, precision_bits);
}

PowerWeightMeasure sqrt_pullback(const PowerWeightMeasure& mu) {
  if (mu.components.size() != 1 || !std::holds_alternative<RealInterval>(mu.components[0]))
    throw UnsupportedGeometryError("sqrt_pullback: support must be a single real interval [0, b]");
  const auto& iv = std::get<RealInterval>(mu.components[0]);
  if (iv.a != 0 || std::abs(mu.z0_snapped) != 0.0)
    throw UnsupportedGeometryError("sqrt_pullback: requires support [0, b] with z0 = 0");

  double rb = std::sqrt(iv.b);
  double new_alpha = 2 * mu.alpha + 1;
  std::function<Real(const Complex&)> old_w = mu.w;
  std::function<Real(const Complex&)> new_w;
  if (old_w) new_w = [old_w](const Complex& y) { return old_w(y * y); };
  return make_measure({RealInterval{-rb, rb}}, Cd(0.0, 0.0), new_alpha, new_w,
                      mu.label.empty() ? std::string() : mu.label + " (sqrt pullback)");
}

}  // namespace ccf
