#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ccf/bessel.hpp"
#include "ccf/constructions.hpp"
#include "ccf/equilibrium.hpp"
#include "ccf/measure.hpp"
#include "ccf/quadrature.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

using namespace ccf;

namespace {

double dabs(const Real& x) {
  using std::abs;
  return to_double(abs(x));
}

// Direct double-precision evaluation of the same products, for cross-checks.
std::pair<std::complex<double>, std::complex<double>> direct_products(
    const DivisionScheme& scheme, std::complex<double> z) {
  std::complex<double> z0 = scheme.z0.to_std(), u = z - z0;
  std::complex<double> a(1.0), b(1.0);
  for (int k = 1; k <= scheme.big_n; ++k) {
    a *= 1.0 - u / (scheme.a_points[scheme.a_zero + k].to_std() - z0);
    a *= 1.0 - u / (scheme.a_points[scheme.a_zero - k].to_std() - z0);
  }
  for (std::size_t i = 0; i < scheme.xi_points.size(); ++i) {
    std::ptrdiff_t k =
        static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(scheme.xi_zero);
    if (k >= -scheme.big_n && k <= scheme.big_n) continue;
    b *= 1.0 - u / (scheme.xi_points[i].to_std() - z0);
  }
  return {a, b};
}

}  // namespace

TEST_CASE("bessel division on [-1,1]: closed forms") {
  PrecisionGuard guard(192);
  EquilibriumDensity eq = density_intervals({-1, 1});
  const int n = 100;
  BesselDivision div = bessel_division(eq, Complex(Real(0)), n, 0.5);

  // arcsin(a_k)/pi = k/n, so a_k = sin(k pi / n); the list reaches the
  // support edge at |k| = n/2 and stops there.
  REQUIRE(div.points.size() == 101);
  REQUIRE(div.zero_index == 50);
  CHECK(dabs(div.points[div.zero_index].re) == 0.0);
  for (int k = 1; k <= 10; ++k) {
    Real want = sin(Real(k) * const_pi() / n);
    CHECK(dabs(div.points[div.zero_index + k].re - want) <= 1e-10);
    CHECK(dabs(div.points[div.zero_index - k].re + want) <= 1e-10);
  }
  CHECK(to_double(div.points.back().re) == 1.0);
  CHECK(to_double(div.points.front().re) == -1.0);

  // Symmetry of the two sides.
  for (std::size_t k = 1; k <= 50; ++k)
    CHECK(dabs(div.points[div.zero_index + k].re + div.points[div.zero_index - k].re) <= 1e-10);
}

TEST_CASE("equal mass division on [-1,1]: closed forms") {
  PrecisionGuard guard(192);
  EquilibriumDensity eq = density_intervals({-1, 1});
  for (int n : {50, 100}) {
    CAPTURE(n);
    EqualMassDivision div = equal_mass_division(eq, Complex(Real(0)), n);

    // Centered cell: b_1 = sin(pi/(2n)) = -b_0.
    Real b1 = div.b_points[div.xi_zero + 1].re;
    Real b0 = div.b_points[div.xi_zero].re;
    CHECK(dabs(b1 - sin(const_pi() / (2 * n))) <= 1e-10);
    CHECK(dabs(b0 + b1) <= 1e-10);
    CHECK(dabs(div.xi_points[div.xi_zero].re) <= 1e-10);

    // Mass centers: xi_k = (n/pi) (sqrt(1-b_k^2) - sqrt(1-b_{k+1}^2)) for the
    // full interior cells.
    for (std::size_t i = div.xi_zero + 1; i + 1 < div.xi_points.size(); ++i) {
      Real u = div.b_points[i].re, v = div.b_points[i + 1].re;
      Real want = Real(n) / const_pi() * (sqrt(1 - u * u) - sqrt(1 - v * v));
      CHECK(dabs(div.xi_points[i].re - want) <= 1e-10);
    }

    // The cells partition the support.
    CHECK(to_double(div.b_points.front().re) == -1.0);
    CHECK(to_double(div.b_points.back().re) == 1.0);
    Real total(0);
    for (std::size_t i = 0; i + 1 < div.b_points.size(); ++i)
      total += eq.mass_between(div.b_points[i].re, div.b_points[i + 1].re);
    CHECK(dabs(total - 1) <= 1e-10);
  }
}

TEST_CASE("division invariants on one and two intervals") {
  PrecisionGuard guard(192);
  struct Setup {
    std::vector<double> endpoints;
    double z0;
  };
  for (const Setup& setup : {Setup{{-1, 1}, 0.0}, Setup{{-1, -0.25, 0.25, 1}, 0.6}}) {
    EquilibriumDensity eq = density_intervals(setup.endpoints);
    Complex z0{Real(setup.z0)};
    for (int n : {100, 500}) {
      CAPTURE(setup.z0);
      CAPTURE(n);
      int stride = n == 100 ? 1 : 17;

      // Cumulative mass from z0 to a_k is j_{beta,|k|}/(pi n), beta = 1/2.
      BesselDivision bd = bessel_division(eq, z0, n, 0.5);
      Real pi_n = const_pi() * n;
      for (std::size_t i = 0; i < bd.points.size(); i += stride) {
        if (i == bd.zero_index) continue;
        std::ptrdiff_t k =
            static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(bd.zero_index);
        Real want = Real(bessel_zero(0.5, static_cast<int>(k > 0 ? k : -k))) / pi_n;
        Real got = eq.mass_between(Real(setup.z0), bd.points[i].re);
        if (k < 0) got = -got;
        CHECK(dabs(got - want) <= 1e-10);
      }

      // Equal-mass cells: interior masses exactly 1/n, remainders below 1/n,
      // total mass 1, and each xi is its cell's mass center.
      EqualMassDivision em = equal_mass_division(eq, z0, n);
      Real cell = Real(1) / n;
      Real total(0);
      for (std::size_t i = 0; i + 1 < em.b_points.size(); ++i) {
        Real m = eq.mass_between(em.b_points[i].re, em.b_points[i + 1].re);
        total += m;
        if (i == 0 || i + 2 == em.b_points.size())
          CHECK(to_double(m) <= to_double(cell) + 1e-10);
        else
          CHECK(dabs(m - cell) <= 1e-10);
      }
      CHECK(dabs(total - 1) <= 1e-9);

      // Mass-center identity on a sample of safely interior cells: the
      // first moment of (u - xi_k) over the cell vanishes.
      for (std::size_t i = 1; i + 1 < em.xi_points.size(); i += stride) {
        Real u = em.b_points[i].re, v = em.b_points[i + 1].re;
        double du = to_double(u), dv = to_double(v);
        bool safe = false;
        for (std::size_t p = 0; p + 1 < setup.endpoints.size(); p += 2) {
          double a = setup.endpoints[p], b = setup.endpoints[p + 1];
          double margin = 0.05 * (b - a);
          if (du >= a + margin && dv <= b - margin) safe = true;
        }
        if (!safe) continue;
        Real xi = em.xi_points[i].re;
        Real resid = integrate_smooth(
            [&](const Real& t) { return (t - xi) * eq.eval(t); }, u, v, Real(1e-13));
        CHECK(dabs(resid) <= 1e-10);
      }
    }
  }
}

TEST_CASE("make_scheme exponents and guards") {
  PrecisionGuard guard(192);
  EquilibriumDensity eq = density_intervals({-1, 1});
  Complex z0{Real(0)};

  DivisionScheme scheme = make_scheme(eq, z0, 200, 0.0);
  CHECK(std::abs(scheme.tau - 15.5 / 16.5) <= 1e-15);
  CHECK(std::abs(scheme.rho - 9.0 * (1 - 15.5 / 16.5)) <= 1e-13);
  CHECK(scheme.big_n == 2);
  CHECK(scheme.beta == 0.5);
  CHECK(make_scheme(eq, z0, 500, 0.0).big_n == 3);

  // tau far from 1 wants N ~ n^2.4 division points, which cannot exist.
  CHECK_THROWS_AS(make_scheme(eq, z0, 200, 0.0, 0.2), InvalidInputError);
  CHECK_THROWS_AS(make_scheme(eq, z0, 200, -1.0), InvalidInputError);
  CHECK_THROWS_AS(make_scheme(eq, Complex(Real(2)), 200, 0.0), InvalidInputError);
  CHECK_THROWS_AS(make_scheme(eq, Complex(Real(1)), 200, 0.0), InvalidInputError);

  EquilibriumDensity circle{EquilibriumDensity::Circle{1.0}};
  CHECK_THROWS_AS(make_scheme(circle, z0, 200, 0.0), UnsupportedGeometryError);
}

TEST_CASE("build_Cn: exact values and double cross-validation") {
  PrecisionGuard guard(192);
  EquilibriumDensity eq = density_intervals({-1, 1});
  Complex z0{Real(0)};

  for (int n : {50, 200}) {
    CAPTURE(n);
    DivisionScheme scheme = make_scheme(eq, z0, n, 0.0);

    // C_n(z0) = 1 exactly: every factor is exactly one.
    CnValue at0 = build_Cn(scheme, z0);
    CHECK(to_double(at0.a.re) == 1.0);
    CHECK(to_double(at0.b.re) == 1.0);
    CHECK(to_double(at0.c.re) == 1.0);
    CHECK(to_double(at0.c.im) == 0.0);

    // A node input returns an exact zero.
    CnValue atnode = build_Cn(scheme, scheme.a_points[scheme.a_zero + 1]);
    CHECK(to_double(abs(atnode.a)) == 0.0);
    CHECK(to_double(abs(atnode.c)) == 0.0);

    // The tracked-product evaluation agrees with a plain double product.
    for (int j = 0; j <= 20; ++j) {
      double x = -0.987 + 1.974 * j / 20.0;
      auto [a_d, b_d] = direct_products(scheme, {x, 0.0});
      CnValue val = build_Cn(scheme, Complex(Real(x)));
      if (std::abs(a_d) > 1e-6) {
        CHECK(std::abs(val.a.to_std() - a_d) <= 1e-9 * std::abs(a_d));
        CHECK(std::abs(val.b.to_std() - b_d) <= 1e-9 * std::abs(b_d));
        CHECK(std::abs(val.c.to_std() - a_d * b_d) <= 1e-9 * std::abs(a_d * b_d));
      }
    }
  }
}

TEST_CASE("A tracks the normalized kernel near z0") {
  PrecisionGuard guard(192);
  EquilibriumDensity eq = density_intervals({-1, 1});
  const int n = 500;
  DivisionScheme scheme = make_scheme(eq, Complex(Real(0)), n, 0.0);

  // omega(0) = 1/pi, so the kernel scale n pi omega(0) is n itself; at
  // x = 0.5/n the kernel argument is 0.5.  The deviation is dominated by
  // the truncation of the kernel's product to N = 3 factors.
  double x = 0.5 / n;
  CnValue val = build_Cn(scheme, Complex(Real(x)));
  double jc = kernel_jcal(0.5, 0.5);
  double dev = std::abs(val.a.to_std() - jc);
  CHECK(dev > 0);
  CHECK(dev <= 0.02);
  CHECK(std::abs(dev - 6.9197e-3) <= 1e-4);
}

TEST_CASE("local behavior reports") {
  std::vector<SupportComponent> comps{RealInterval{-1, 1}};
  PowerWeightMeasure mu = make_measure(comps, {0.0, 0.0}, 0.0);
  EquilibriumDensity eq = density_intervals({-1, 1});

  // Reference values for the default tau on the two smallest ladder points;
  // regenerate with tools/oracle_constructions.py.
  auto reports = verify_local_behavior(mu, eq, {100, 200});
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].big_n == 2);
  CHECK(std::abs(reports[0].max_b_dev - 0.067786) <= 1e-4);
  CHECK(std::abs(reports[0].max_a_dev - 0.030722) <= 1e-4);
  CHECK(std::abs(reports[0].scaled_integral - 2.196169) <= 1e-3);
  CHECK(std::abs(reports[1].max_b_dev - 0.073569) <= 1e-4);
  CHECK(std::abs(reports[1].max_a_dev - 0.033015) <= 1e-4);
  CHECK(std::abs(reports[1].scaled_integral - 2.255472) <= 1e-3);
  for (const LocalReport& rep : reports) {
    CHECK(rep.sup_c >= 1.0);
    CHECK(rep.sup_c <= 1.0 + 1e-9);
    CHECK(std::abs(rep.limit_constant - M_PI) <= 1e-12);
    CHECK(rep.ratio > 0);
    CHECK(rep.ratio <= 1.25);
  }

  // The explicitly quoted configuration: tau = 15/16 at n = 500.
  LocalBehaviorConfig cfg;
  cfg.tau = 15.0 / 16.0;
  auto quoted = verify_local_behavior(mu, eq, {500}, cfg);
  REQUIRE(quoted.size() == 1);
  CHECK(quoted[0].max_b_dev > 0);
  CHECK(quoted[0].max_b_dev < 0.2);
  CHECK(quoted[0].max_a_dev > 0);
  CHECK(quoted[0].max_a_dev < 0.2);
  CHECK(quoted[0].scaled_integral <= 1.25 * quoted[0].limit_constant);
}

TEST_CASE("local behavior rejects mismatched geometry") {
  std::vector<SupportComponent> comps{RealInterval{-1, 1}};
  PowerWeightMeasure mu = make_measure(comps, {0.0, 0.0}, 0.0);
  EquilibriumDensity two = density_intervals({-1, -0.25, 0.25, 1});
  CHECK_THROWS_AS(verify_local_behavior(mu, two, {100}), InvalidInputError);

  std::vector<SupportComponent> circle{UnitCircle{}};
  PowerWeightMeasure mu_c = make_measure(circle, {0.0, 1.0}, 0.0);
  EquilibriumDensity eq_c{EquilibriumDensity::Circle{1.0}};
  CHECK_THROWS_AS(verify_local_behavior(mu_c, eq_c, {100}), UnsupportedGeometryError);
}
