#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ccf/quadrature.hpp"

#include <cmath>
#include <random>

using namespace ccf;

namespace {

double rel_err(const Real& got, const Real& want) {
  using std::abs;
  Real scale = abs(want);
  if (scale < Real(1e-300)) scale = 1;
  return to_double(abs(got - want) / scale);
}

// Independent moment reference: integral of x^m (1-x)^p (1+x)^q over [-1,1]
// through the substitution x = 2u-1 and the Beta integral,
//   2^{p+q+1} * sum_j C(m,j) 2^j (-1)^{m-j} B(q+j+1, p+1).
Real moment_reference(int m, const Real& p, const Real& q) {
  auto beta = [](const Real& a, const Real& b) { return tgamma(a) * tgamma(b) / tgamma(a + b); };
  Real sum(0), binom(1);
  Real two_j(1);
  for (int j = 0; j <= m; ++j) {
    Real term = binom * two_j * beta(q + j + 1, p + 1);
    sum += ((m - j) % 2 == 0) ? term : -term;
    binom = binom * (m - j) / (j + 1);
    two_j *= 2;
  }
  return pow_real(Real(2), p + q + 1) * sum;
}

}  // namespace

TEST_CASE("order-one Legendre rule is the midpoint rule") {
  PrecisionGuard guard(256);
  QuadratureRule r = gauss_jacobi(1, Real(0), Real(0));
  REQUIRE(r.order == 1);
  CHECK(to_double(abs(r.nodes[0])) <= 1e-60);
  CHECK(rel_err(r.weights[0], Real(2)) <= 1e-60);
}

TEST_CASE("order-two Legendre rule has nodes at +-1/sqrt(3) with unit weights") {
  PrecisionGuard guard(256);
  QuadratureRule r = gauss_jacobi(2, Real(0), Real(0));
  Real x = sqrt(Real(1) / 3);
  REQUIRE(r.order == 2);
  CHECK(rel_err(r.nodes[0], -x) <= 1e-50);
  CHECK(rel_err(r.nodes[1], x) <= 1e-50);
  CHECK(rel_err(r.weights[0], Real(1)) <= 1e-50);
  CHECK(rel_err(r.weights[1], Real(1)) <= 1e-50);
}

TEST_CASE("Chebyshev rule integrates x^2 to pi/2") {
  PrecisionGuard guard(256);
  QuadratureRule r = gauss_jacobi(4, Real(-0.5), Real(-0.5));
  Real sum(0);
  for (int i = 0; i < r.order; ++i) sum += r.weights[i] * r.nodes[i] * r.nodes[i];
  CHECK(rel_err(sum, const_pi() / 2) <= 1e-50);
}

TEST_CASE("weights are positive, nodes increasing and interior") {
  PrecisionGuard guard(256);
  for (double p : {-0.5, 0.0, 0.7, 2.5}) {
    for (double q : {-0.5, 0.0, 1.0}) {
      for (int order : {1, 2, 3, 5, 8, 13, 21, 34}) {
        QuadratureRule r = gauss_jacobi(order, Real(p), Real(q));
        REQUIRE(static_cast<int>(r.nodes.size()) == order);
        for (int i = 0; i < order; ++i) {
          CHECK(r.weights[i] > 0);
          CHECK(r.nodes[i] > -1);
          CHECK(r.nodes[i] < 1);
          if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
        }
      }
    }
  }
}

TEST_CASE("weights sum to the Beta-function total mass") {
  PrecisionGuard guard(256);
  for (double p : {-0.5, -0.3, 0.0, 0.7, 1.0, 2.5}) {
    for (double q : {-0.5, 0.0, 0.7, 2.5}) {
      for (int order : {1, 2, 3, 5, 8, 13, 21, 34}) {
        QuadratureRule r = gauss_jacobi(order, Real(p), Real(q));
        Real sum(0);
        for (const Real& w : r.weights) sum += w;
        CHECK(rel_err(sum, moment_reference(0, Real(p), Real(q))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("rules are exact on monomials up to degree 2n-1") {
  PrecisionGuard guard(320);
  const std::pair<double, double> pq[] = {{0.0, 0.0}, {-0.5, -0.5}, {0.7, -0.2}, {2.0, 0.5}};
  for (auto [p, q] : pq) {
    for (int order : {1, 2, 3, 4, 6, 10, 16}) {
      QuadratureRule r = gauss_jacobi(order, Real(p), Real(q));
      Real mu0 = moment_reference(0, Real(p), Real(q));
      for (int m = 0; m <= 2 * order - 1; ++m) {
        Real sum(0);
        for (int i = 0; i < order; ++i) {
          Real xm(1);
          for (int k = 0; k < m; ++k) xm *= r.nodes[i];
          sum += r.weights[i] * xm;
        }
        Real want = moment_reference(m, Real(p), Real(q));
        CHECK(to_double(abs(sum - want)) <= 1e-30 * to_double(mu0));
      }
    }
  }
}

TEST_CASE("singular integral closed forms") {
  PrecisionGuard guard(256);
  Real tol(1e-13);
  auto one = [](const Real&) { return Real(1); };
  auto square = [](const Real& x) { return x * x; };

  Real v1 = integrate_singular(one, Real(-1), Real(1), Real(0), Real(0.5), tol);
  CHECK(rel_err(v1, Real(4) / 3) <= 1e-12);

  Real v2 = integrate_singular(one, Real(-1), Real(1), std::nullopt, Real(0), tol);
  CHECK(rel_err(v2, Real(2)) <= 1e-12);

  Real v3 = integrate_singular(square, Real(-1), Real(1), Real(0), Real(-0.5), tol);
  CHECK(rel_err(v3, Real(4) / 5) <= 1e-12);
}

TEST_CASE("singular integral matches analytic moments of random polynomials") {
  PrecisionGuard guard(256);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Real tol(1e-13);
  for (double alpha : {-0.5, 0.5, 1.3}) {
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<double> c(7);
      for (double& ck : c) ck = coeff(rng);
      auto f = [&](const Real& x) {
        Real v(0);
        for (int k = 6; k >= 0; --k) v = v * x + c[k];
        return v;
      };
      // integral of x^k |x|^alpha over [-1,1]: even k -> 2/(k+alpha+1), odd -> 0
      Real want(0), scale(0);
      for (int k = 0; k <= 6; k += 2) {
        want += Real(c[k]) * 2 / (k + Real(alpha) + 1);
        scale += abs(Real(c[k])) * 2 / (k + Real(alpha) + 1);
      }
      Real got = integrate_singular(f, Real(-1), Real(1), Real(0), Real(alpha), tol);
      CHECK(to_double(abs(got - want)) <= 5e-12 * to_double(scale));

      // Tightening the tolerance moves the result by less than the looser one.
      Real finer = integrate_singular(f, Real(-1), Real(1), Real(0), Real(alpha), Real(1e-16));
      CHECK(to_double(abs(finer - got)) <= 1e-12 * (1 + to_double(scale)));
    }
  }
}

TEST_CASE("additivity across an interior singular point") {
  PrecisionGuard guard(256);
  Real tol(1e-13);
  auto f = [](const Real& x) { return cos(x) + x * x * x; };
  Real s(0.3), alpha(-0.4);
  Real whole = integrate_singular(f, Real(-1), Real(1), s, alpha, tol);
  Real left = integrate_singular(f, Real(-1), s, s, alpha, tol);
  Real right = integrate_singular(f, s, Real(1), s, alpha, tol);
  CHECK(to_double(abs(whole - (left + right))) <= 2 * to_double(tol) * (1 + to_double(abs(whole))));
}

TEST_CASE("arc length closed forms") {
  PrecisionGuard guard(256);
  Real tol(1e-13);

  SupportComponent circle = make_component(UnitCircle{});
  CHECK(rel_err(component_length(circle, tol), 2 * const_pi()) <= 1e-12);

  SupportComponent interval = make_component(RealInterval{-2.0, 5.0});
  CHECK(rel_err(component_length(interval, tol), Real(7)) <= 1e-12);

  SupportComponent arc = make_component(CircularArc{Cd(1.0, 2.0), 0.5, 0.2, 1.7});
  CHECK(rel_err(component_length(arc, tol), Real(0.75)) <= 1e-12);

  // |z^2| = 1 is the unit circle traced through the squaring map.
  SupportComponent lem = make_component(Lemniscate{ComplexPolynomial({Cd(0), Cd(0), Cd(1)}), 0, nullptr});
  CHECK(rel_err(component_length(lem, tol), 2 * const_pi()) <= 1e-10);
}

TEST_CASE("arc integral of |z - i|^2 over the unit circle") {
  PrecisionGuard guard(256);
  Real tol(1e-13);
  SupportComponent circle = make_component(UnitCircle{});
  auto g = [](const Complex& z) {
    Complex d = z - Complex(Real(0), Real(1));
    return norm(d);
  };
  CHECK(rel_err(integrate_arc(circle, g, tol), 4 * const_pi()) <= 1e-12);
}
