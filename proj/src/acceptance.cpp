#include "ccf/acceptance.hpp"

#include "ccf/asymptotics.hpp"
#include "ccf/bessel.hpp"
#include "ccf/christoffel.hpp"
#include "ccf/constructions.hpp"
#include "ccf/equilibrium.hpp"
#include "ccf/errors.hpp"
#include "ccf/harness.hpp"
#include "ccf/measure.hpp"
#include "ccf/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace ccf {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, ...) {
  char buf[400];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

struct Suite {
  explicit Suite(std::ostream& os) : out(os) {}
  std::ostream& out;
  int failures = 0;
  int index = 0;

  void run(const std::string& label, const std::function<std::pair<bool, std::string>()>& body) {
    ++index;
    auto start = Clock::now();
    bool pass = false;
    std::string detail;
    try {
      auto result = body();
      pass = result.first;
      detail = std::move(result.second);
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char line[600];
    std::snprintf(line, sizeof(line), "[%s] %02d %-32s %s  (%.1fs)\n", pass ? "PASS" : "FAIL",
                  index, label.c_str(), detail.c_str(), secs);
    out << line;
    out.flush();
    if (!pass) ++failures;
  }
};

double rel_dev(const Real& got, const Real& want) { return to_double(abs(got - want) / abs(want)); }

ScenarioConfig scenario_cfg(const std::string& id, double alpha) {
  ScenarioConfig c;
  c.scenario_id = id;
  c.alpha = alpha;
  return c;
}

// A scenario run is usable only if every ladder entry produced a value.
bool rows_ok(const ConvergenceReport& rep) {
  return !rep.rows.empty() &&
         std::all_of(rep.rows.begin(), rep.rows.end(), [](const ReportRow& r) { return r.ok; });
}

// ---------------------------------------------------------------------------
// 1-2: closed-form oracles
// ---------------------------------------------------------------------------

std::pair<bool, std::string> circle_oracle() {
  PrecisionGuard guard(192);
  PowerWeightMeasure mu = make_measure({UnitCircle{}}, Cd(1.0, 0.0), 0.0);
  std::vector<int> ns(51);
  std::iota(ns.begin(), ns.end(), 0);
  auto res = lambda_sweep(mu, ns);
  double worst = 0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    worst = std::max(worst, rel_dev(res[i].lambda, 2 * const_pi() / (ns[i] + 1)));
  return {worst < 1e-10, fmt("max rel dev %.2e vs 2pi/(n+1) for n<=50 (need <1e-10)", worst)};
}

std::pair<bool, std::string> interval_endpoint_oracle() {
  PrecisionGuard guard(192);
  PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(1.0, 0.0), 0.0);
  std::vector<int> ns(50);
  std::iota(ns.begin(), ns.end(), 1);
  auto res = lambda_sweep(mu, ns);
  double worst = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    Real want = Real(2) / ((ns[i] + 1.0) * (ns[i] + 1.0));
    worst = std::max(worst, rel_dev(res[i].lambda, want));
  }
  return {worst < 1e-8, fmt("max rel dev %.2e vs 2/(n+1)^2 for n<=50 (need <1e-8)", worst)};
}

// ---------------------------------------------------------------------------
// 3-4: exact identities between measures
// ---------------------------------------------------------------------------

std::pair<bool, std::string> fold_identity() {
  double worst = 0;
  for (double a : {1.0, 2.0}) {
    PowerWeightMeasure lhs = make_measure({RealInterval{0, 1}}, Cd(0.0, 0.0), (a - 1) / 2);
    PowerWeightMeasure rhs = make_measure({RealInterval{-1, 1}}, Cd(0.0, 0.0), a);
    std::vector<int> ns{5, 10, 20, 40}, ns2{10, 20, 40, 80};
    auto l = lambda_sweep(lhs, ns);
    auto r = lambda_sweep(rhs, ns2);
    for (std::size_t i = 0; i < ns.size(); ++i)
      worst = std::max(worst, rel_dev(l[i].lambda, r[i].lambda));
  }
  return {worst < 1e-8,
          fmt("max rel dev %.2e between lambda_n and lambda_2n, a in {1,2} (need <1e-8)", worst)};
}

std::pair<bool, std::string> pullback_identity() {
  PowerWeightMeasure mu = make_measure({RealInterval{0, 1}}, Cd(0.0, 0.0), 0.0);
  PowerWeightMeasure pulled = sqrt_pullback(mu);
  std::vector<int> ns{10, 20, 40}, ns2{20, 40, 80};
  auto l = lambda_sweep(mu, ns);
  auto r = lambda_sweep(pulled, ns2);
  double worst = 0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    worst = std::max(worst, rel_dev(l[i].lambda, r[i].lambda));

  PrecisionGuard guard(192);
  double m_dev = to_double(abs(endpoint_constant({0, 1}, 0.0) - 1 / const_pi()));
  double om_dev = to_double(abs(density_intervals({-1, 1}).eval(Real(0)) - 1 / const_pi()));
  bool pass = worst < 1e-8 && m_dev < 1e-10 && om_dev < 1e-10;
  return {pass, fmt("max rel dev %.2e (need <1e-8); |M(0)-1/pi| %.1e, |omega(0)-1/pi| %.1e "
                    "(need <1e-10)",
                    worst, m_dev, om_dev)};
}

// ---------------------------------------------------------------------------
// 5-10: limit theorems through the scenario runner
// ---------------------------------------------------------------------------

std::pair<bool, std::string> endpoint_power_limits() {
  double dev0 = 0, dev1 = 0, rows_dev = 0;
  {
    ConvergenceReport rep = run_scenario(scenario_cfg("model1", 0.0));
    if (!rows_ok(rep)) return {false, "a ladder entry failed (a=0)"};
    dev0 = std::abs(rep.extrapolated_ratio - 1.0);
    for (const ReportRow& row : rep.rows) {
      double exact = 1.0 / ((row.n + 1.0) * (row.n + 1.0));
      rows_dev = std::max(rows_dev, std::abs(row.lambda - exact) / exact);
    }
  }
  {
    ConvergenceReport rep = run_scenario(scenario_cfg("model1", 1.0));
    if (!rows_ok(rep)) return {false, "a ladder entry failed (a=1)"};
    dev1 = std::abs(rep.extrapolated_ratio - 1.0);
  }
  bool pass = dev0 < 0.02 && dev1 < 0.02 && rows_dev < 1e-8;
  return {pass, fmt("limit dev %.4f (a=0), %.4f (a=1) vs G(a+1)G(a+2) (need <0.02); "
                    "exact-row dev %.1e (need <1e-8)",
                    dev0, dev1, rows_dev)};
}

std::pair<bool, std::string> interior_power_limits() {
  double dev0 = 0, dev1 = 0;
  {
    ConvergenceReport rep = run_scenario(scenario_cfg("model2", 0.0));
    if (!rows_ok(rep)) return {false, "a ladder entry failed (a=0)"};
    dev0 = std::abs(rep.extrapolated_ratio - 1.0);
  }
  {
    ConvergenceReport rep = run_scenario(scenario_cfg("model2", 1.0));
    if (!rows_ok(rep)) return {false, "a ladder entry failed (a=1)"};
    dev1 = std::abs(rep.extrapolated_ratio - 1.0);
  }
  bool pass = dev0 < 0.02 && dev1 < 0.02;
  return {pass,
          fmt("limit dev %.4f (a=0, target pi), %.4f (a=1, target 4) (need <0.02)", dev0, dev1)};
}

std::pair<bool, std::string> circle_power_limit() {
  ConvergenceReport rep = run_scenario(scenario_cfg("circle_power", 1.0));
  if (!rows_ok(rep)) return {false, "a ladder entry failed"};
  double dev = std::abs(rep.extrapolated_ratio - 1.0);
  bool pass = dev < 0.03 && std::abs(rep.predicted_limit - 16.0) < 1e-10;
  return {pass, fmt("n^2 lambda_n -> %.4f vs 16 (dev %.4f, need <0.03)", rep.extrapolated_limit,
                    dev)};
}

std::pair<bool, std::string> lemniscate_limit() {
  ConvergenceReport rep = run_scenario(scenario_cfg("lemniscate_power", 0.0));
  if (!rows_ok(rep)) return {false, "a ladder entry failed"};
  double dev = std::abs(rep.extrapolated_ratio - 1.0);

  // Degenerate level set: {|z^2| = 1} is the unit circle, so the curved-path
  // computation must agree with the plain circle one at equal degrees (a
  // consistency check of the machinery, not an asymptotic statement).
  ComplexPolynomial t2({Cd(0.0, 0.0), Cd(0.0, 0.0), Cd(1.0, 0.0)});
  PowerWeightMeasure lem = make_measure({Lemniscate{t2, 0, nullptr}}, Cd(0.0, 1.0), 1.0);
  PowerWeightMeasure cir = make_measure({UnitCircle{}}, Cd(0.0, 1.0), 1.0);
  std::vector<int> ns{5, 10, 20};
  auto l = lambda_sweep(lem, ns);
  auto c = lambda_sweep(cir, ns);
  double worst = 0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    worst = std::max(worst, rel_dev(l[i].lambda, c[i].lambda));
  bool pass = dev < 0.03 && worst < 1e-6;
  return {pass, fmt("n lambda_n -> %.4f vs %.4f (dev %.4f, need <0.03); degenerate-vs-circle "
                    "dev %.1e (need <1e-6)",
                    rep.extrapolated_limit, rep.predicted_limit, dev, worst)};
}

std::pair<bool, std::string> two_interval_limit() {
  ConvergenceReport rep = run_scenario(scenario_cfg("two_intervals_interior", 0.0));
  if (!rows_ok(rep)) return {false, "a ladder entry failed"};
  double dev = std::abs(rep.extrapolated_ratio - 1.0);

  PrecisionGuard guard(192);
  Real x(0.6);
  Real closed = x / (const_pi() * sqrt((x * x - Real(1) / 16) * (1 - x * x)));
  Real solved = density_intervals({-1, -0.25, 0.25, 1}).eval(x);
  double form_dev = rel_dev(solved, closed);
  bool pass = dev < 0.04 && form_dev < 1e-10;
  return {pass, fmt("n lambda_n dev %.4f (need <0.04); density closed-form vs solver dev %.1e "
                    "(need <1e-10)",
                    dev, form_dev)};
}

std::pair<bool, std::string> interval_endpoint_limit() {
  ConvergenceReport rep = run_scenario(scenario_cfg("interval_endpoint", 1.0));
  if (!rows_ok(rep)) return {false, "a ladder entry failed"};
  double dev = std::abs(rep.extrapolated_ratio - 1.0);

  // Cross-check the endpoint prediction against the constant obtained by
  // folding [-1,1] at 1 onto the half-line model: 2^{a+1} G(a+1) G(a+2).
  PrecisionGuard guard(192);
  Real a(1);
  Real via_m = predict_endpoint(Real(1), endpoint_constant({-1, 1}, 1.0), a).limit;
  Real known = pow_real(Real(2), a + 1) * tgamma(a + 1) * tgamma(a + 2);
  double cross = rel_dev(via_m, known);
  bool pass = dev < 0.04 && cross < 1e-12;
  return {pass, fmt("n^4 lambda_n -> %.4f vs %.1f (dev %.4f, need <0.04); prediction "
                    "cross-check dev %.1e (need <1e-12)",
                    rep.extrapolated_limit, to_double(known), dev, cross)};
}

// ---------------------------------------------------------------------------
// 11-12: module invariants
// ---------------------------------------------------------------------------

// Defining integral of the gap-root polynomial over the gap (u, v), with the
// inverse-square-root endpoint singularities removed by x = u + y^2 on the
// left half and x = v - y^2 on the right half.
Real gap_integral(const std::vector<double>& endpoints, const std::vector<double>& roots,
                  double u, double v) {
  auto half = [&](double edge, double sign, const Real& ylim) {
    auto f = [&, edge, sign](const Real& y) {
      Real x = Real(edge) + sign * y * y;
      Real p(1);
      for (double r : roots) p *= x - Real(r);
      Real q(1);
      for (double e : endpoints)
        if (e != edge) q *= abs(x - Real(e));
      // dx = 2 sign y dy and the orientation flip on the right half cancel,
      // so both halves enter with the same positive factor.
      return 2 * p / sqrt(q);
    };
    return integrate_smooth(f, Real(0), ylim, Real(1e-13));
  };
  Real mid = (Real(u) + Real(v)) / 2;
  return half(u, 1.0, sqrt(mid - u)) + half(v, -1.0, sqrt(Real(v) - mid));
}

std::pair<bool, std::string> equilibrium_invariants() {
  PrecisionGuard guard(192);
  double worst_gap = 0;
  for (const std::vector<double>& eps :
       {std::vector<double>{-1, -0.25, 0.25, 1}, std::vector<double>{-1, -0.3, 0.2, 0.9}}) {
    std::vector<double> roots = gap_roots(eps);
    for (std::size_t g = 1; g + 1 < eps.size() - 1; g += 2)
      worst_gap = std::max(worst_gap,
                           std::abs(to_double(gap_integral(eps, roots, eps[g], eps[g + 1]))));
  }

  double worst_mass = 0;
  worst_mass = std::max(
      worst_mass, std::abs(to_double(density_intervals({-1, 1}).mass(Real(1e-11)) - 1)));
  worst_mass = std::max(
      worst_mass,
      std::abs(to_double(density_intervals({-1, -0.25, 0.25, 1}).mass(Real(1e-11)) - 1)));
  ComplexPolynomial t({Cd(-0.5, 0.0), Cd(0.0, 0.0), Cd(1.0, 0.0)});
  worst_mass =
      std::max(worst_mass, std::abs(to_double(density_lemniscate(t).mass(Real(1e-11)) - 1)));

  double sym_root = std::abs(gap_roots({-1, -0.25, 0.25, 1})[0]);
  bool pass = worst_gap < 1e-10 && worst_mass < 1e-9 && sym_root < 1e-12;
  return {pass, fmt("gap integrals %.1e (need <1e-10); mass dev %.1e (need <1e-9); symmetric "
                    "gap root %.1e (need <1e-12)",
                    worst_gap, worst_mass, sym_root)};
}

std::pair<bool, std::string> bessel_invariants() {
  PrecisionGuard guard(192);
  double worst_half = 0;
  for (int k = 1; k <= 20; ++k)
    worst_half = std::max(worst_half, std::abs(bessel_zero(0.5, k) - k * M_PI));
  double j0_dev = std::abs(bessel_zero(0.0, 1) - 2.404825557695773);

  double i_0_50 = to_double(kernel_square_integral(Real(0), Real(50)));
  bool window = i_0_50 >= M_PI - 0.04 && i_0_50 <= M_PI;

  double worst_excess = -1;  // most positive value of I(a, A)/L_a - 1
  for (double a : {-0.5, 0.0, 1.0, 2.0})
    for (double big_a : {10.0, 50.0, 200.0}) {
      Real ratio = kernel_square_integral(Real(a), Real(big_a)) / l_alpha(Real(a));
      worst_excess = std::max(worst_excess, to_double(ratio) - 1.0);
    }
  bool pass = worst_half < 1e-12 && j0_dev < 1e-12 && window && worst_excess <= 1e-9;
  return {pass, fmt("|j(1/2,k)-k pi| %.1e, j(0,1) dev %.1e (need <1e-12); I(0,50)=%.5f in "
                    "[pi-0.04, pi]: %s; sup I/L-1 %.1e (need <=1e-9)",
                    worst_half, j0_dev, i_0_50, window ? "yes" : "no", worst_excess)};
}

// ---------------------------------------------------------------------------
// 13: pushforward identities on the lemniscate
// ---------------------------------------------------------------------------

std::pair<bool, std::string> pushforward_identities() {
  ComplexPolynomial t({Cd(-0.5, 0.0), Cd(0.0, 0.0), Cd(1.0, 0.0)});
  LemniscateCurve curve(t);
  const int winding = curve.winding(0);
  const int deg = t.degree();
  const double period = 2 * M_PI * winding;

  // Periodic trapezoid rule: the integrands are smooth and periodic, so a
  // fixed 4096-node rule sits far below the 1e-8 budget.
  const int nodes = 4096;
  auto integrate = [&](const std::function<Cd(double)>& f) {
    Cd acc(0.0, 0.0);
    for (int i = 0; i < nodes; ++i) acc += f(period * i / nodes);
    return acc * (period / nodes);
  };
  // |T'(z)| ds = |T'(z)| |dz/dtheta| dtheta, assembled from the evaluated
  // trace rather than simplified away, so the parametrization itself is on
  // trial.
  auto measure_factor = [&](Cd z) { return std::abs(t.eval_derivative(z)); };
  auto speed = [&](double th) {
    Complex v = curve.velocity(0, Real(th));
    return to_double(abs(v));
  };

  // (a) For g(w) = w^m the pushforward of |T'| ds under T integrates g over
  // the unit circle winding times: the result is 2 pi winding [m = 0].
  double worst_a = 0;
  for (int m = -4; m <= 4; ++m) {
    Cd lhs = integrate([&](double th) {
      Cd z = curve.point_d(0, th);
      return std::pow(t.eval(z), m) * measure_factor(z) * speed(th);
    });
    Cd rhs = m == 0 ? Cd(period, 0.0) : Cd(0.0, 0.0);
    worst_a = std::max(worst_a, std::abs(lhs - rhs));
  }

  // (b) Fiber symmetrization: every value w = T(z) has exactly deg preimages
  // and all of them lie on the level set, so integrating the fiber sum of f
  // against |T'| ds over-counts the plain integral exactly deg times.
  auto f = [](Cd z) {
    return Cd(1.0, 0.5) * z * z * z + Cd(0.3, -0.2) * z * z + Cd(-0.7, 0.1) * z + Cd(0.2, 0.3);
  };
  Cd plain = integrate([&](double th) {
    Cd z = curve.point_d(0, th);
    return f(z) * measure_factor(z) * speed(th);
  });
  Cd fiber = integrate([&](double th) {
    Cd z = curve.point_d(0, th);
    Cd sum(0.0, 0.0);
    for (Cd w : preimages(t, t.eval(z))) sum += f(w);
    return sum * measure_factor(z) * speed(th);
  });
  double dev_b = std::abs(fiber - static_cast<double>(deg) * plain) / (1 + std::abs(plain));

  bool pass = worst_a < 1e-8 && dev_b < 1e-8;
  return {pass, fmt("pushforward residual %.1e; fiber-sum residual %.1e (need <1e-8)", worst_a,
                    dev_b)};
}

// ---------------------------------------------------------------------------
// 14: local construction trends
// ---------------------------------------------------------------------------

std::pair<bool, std::string> construction_trends() {
  PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0.0, 0.0), 0.0);
  EquilibriumDensity eq = density_intervals({-1, 1});
  auto reps = verify_local_behavior(mu, eq, {200, 500, 1000});
  if (reps.size() != 3) return {false, "expected three reports"};
  bool b_trend = reps[2].max_b_dev < reps[0].max_b_dev;
  bool integral_ok = reps[2].scaled_integral <= 1.25 * M_PI;
  bool sup_ok = true;
  for (int i = 1; i < 3; ++i)
    if (!(reps[i].sup_c < 10 * reps[i - 1].sup_c)) sup_ok = false;
  bool pass = b_trend && integral_ok && sup_ok;
  return {pass, fmt("max|B-1| %.4f/%.4f/%.4f falls end to end: %s; n*integral %.4f <= %.4f: "
                    "%s; sup|C| growth <10x: %s",
                    reps[0].max_b_dev, reps[1].max_b_dev, reps[2].max_b_dev,
                    b_trend ? "yes" : "no", reps[2].scaled_integral, 1.25 * M_PI,
                    integral_ok ? "yes" : "no", sup_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 15: determinism
// ---------------------------------------------------------------------------

std::pair<bool, std::string> csv_determinism() {
  ScenarioConfig c = scenario_cfg("model2", 0.0);
  c.n_ladder = {16, 25, 40};
  std::string first = to_csv(run_scenario(c));
  std::string second = to_csv(run_scenario(c));
  bool pass = !first.empty() && first == second;
  return {pass,
          fmt("two runs, %zu bytes each: %s", first.size(), pass ? "byte-identical" : "MISMATCH")};
}

}  // namespace

int run_verification(std::ostream& out) {
  Suite suite(out);
  auto start = Clock::now();
  suite.run("circle oracle", circle_oracle);
  suite.run("interval endpoint oracle", interval_endpoint_oracle);
  suite.run("fold identity", fold_identity);
  suite.run("pullback identity", pullback_identity);
  suite.run("endpoint power limits", endpoint_power_limits);
  suite.run("interior power limits", interior_power_limits);
  suite.run("circle power limit", circle_power_limit);
  suite.run("lemniscate limit", lemniscate_limit);
  suite.run("two-interval interior limit", two_interval_limit);
  suite.run("interval endpoint limit", interval_endpoint_limit);
  suite.run("equilibrium invariants", equilibrium_invariants);
  suite.run("bessel invariants", bessel_invariants);
  suite.run("pushforward identities", pushforward_identities);
  suite.run("local construction trends", construction_trends);
  suite.run("csv determinism", csv_determinism);
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  char line[160];
  std::snprintf(line, sizeof(line), "%d of 15 checks passed (%.1fs total)\n", 15 - suite.failures,
                secs);
  out << line;
  return suite.failures;
}

}  // namespace ccf
