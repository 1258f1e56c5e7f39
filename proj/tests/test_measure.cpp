#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ccf/linalg.hpp"
#include "ccf/measure.hpp"

#include <cmath>

using namespace ccf;

namespace {

double rel_err(const Real& got, const Real& want) {
  using std::abs;
  Real scale = abs(want);
  if (scale < Real(1e-300)) scale = 1;
  return to_double(abs(got - want) / scale);
}

}  // namespace

TEST_CASE("make_measure classifies the base point") {
  PrecisionGuard guard(192);

  PowerWeightMeasure interior = make_measure({RealInterval{-1, 1}}, Cd(0, 0), 0.0);
  CHECK(interior.z0_component == 0);
  CHECK_FALSE(interior.z0_at_endpoint);

  PowerWeightMeasure endpoint = make_measure({RealInterval{0, 1}}, Cd(0, 0), 0.5);
  CHECK(endpoint.z0_at_endpoint);
  CHECK(endpoint.z0_param == 0.0);

  PowerWeightMeasure circ = make_measure({UnitCircle{}}, Cd(0, 1), 1.0);
  CHECK(circ.z0_component == 0);
  CHECK_FALSE(circ.z0_at_endpoint);
  CHECK(std::abs(circ.z0_param - M_PI / 2) <= 1e-12);

  CHECK_THROWS_AS(make_measure({RealInterval{-1, 1}}, Cd(0.5, 0.25), 0.0), InvalidInputError);
  CHECK_THROWS_AS(make_measure({RealInterval{-1, 1}}, Cd(0, 0), -1.0), InvalidInputError);
}

TEST_CASE("total mass closed forms") {
  PrecisionGuard guard(192);
  Real tol(1e-14);

  for (double alpha : {-0.5, 0.5, 2.0}) {
    PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0, 0), alpha);
    CHECK(rel_err(total_mass(mu, tol), Real(2) / (Real(alpha) + 1)) <= 1e-13);
  }
  PowerWeightMeasure circ = make_measure({UnitCircle{}}, Cd(1, 0), 0.0);
  CHECK(rel_err(total_mass(circ, tol), 2 * const_pi()) <= 1e-13);

  PowerWeightMeasure half = make_measure({RealInterval{-1, 1}}, Cd(0, 0), 0.5);
  CHECK(rel_err(total_mass(half, tol), Real(4) / 3) <= 1e-13);
}

TEST_CASE("gram matches hand moments: circle, monomial") {
  PowerWeightMeasure circ = make_measure({UnitCircle{}}, Cd(1, 0), 0.0);
  GramSystem sys = gram(circ, 2, GramBasis::monomial, 192);
  PrecisionGuard guard(192);
  Real two_pi = 2 * const_pi();
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; k <= 2; ++k) {
      Real want = (j == k) ? two_pi : Real(0);
      CHECK(to_double(abs(sys.entries(j, k) - Complex(want))) <= 1e-40);
    }
}

TEST_CASE("gram matches hand moments: Lebesgue interval, monomial") {
  PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0, 0), 0.0);
  GramSystem sys = gram(mu, 1, GramBasis::monomial, 192);
  CHECK(to_double(abs(sys.entries(0, 0) - Complex(Real(2)))) <= 1e-40);
  CHECK(to_double(abs(sys.entries(0, 1))) <= 1e-40);
  CHECK(to_double(abs(sys.entries(1, 0))) <= 1e-40);
  PrecisionGuard guard(192);
  CHECK(to_double(abs(sys.entries(1, 1) - Complex(Real(2) / 3))) <= 1e-40);
}

TEST_CASE("gram matches hand moments: |x| weight, monomial") {
  PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0, 0), 1.0);
  GramSystem sys = gram(mu, 2, GramBasis::monomial, 192);
  PrecisionGuard guard(192);
  const double want[3][3] = {{1, 0, 0.5}, {0, 0.5, 0}, {0.5, 0, 1.0 / 3}};
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; k <= 2; ++k) {
      Real w = Real(want[j][k]);
      if (j + k == 4) w = Real(1) / 3;
      CHECK(to_double(abs(sys.entries(j, k) - Complex(w))) <= 1e-40);
    }
}

TEST_CASE("gram is Hermitian and positive definite across geometries") {
  auto check_system = [](const PowerWeightMeasure& mu, int n) {
    GramSystem sys = gram(mu, n, default_basis(mu), 256);
    PrecisionGuard guard(256);
    for (int j = 0; j <= n; ++j) {
      CHECK(sys.entries(j, j).im == 0);
      CHECK(sys.entries(j, j).re > 0);
      for (int k = 0; k <= n; ++k) {
        Complex d = sys.entries(j, k) - conj(sys.entries(k, j));
        CHECK(to_double(abs(d)) == 0.0);
      }
    }
    CHECK_NOTHROW(cholesky(sys.entries));
  };

  check_system(make_measure({RealInterval{-1, 1}}, Cd(0.6, 0), 0.5), 24);
  check_system(make_measure({RealInterval{-1, -0.25}, RealInterval{0.25, 1}}, Cd(0.6, 0), 1.0), 16);
  check_system(make_measure({UnitCircle{}}, Cd(0, 1), 1.0), 24);
  check_system(
      make_measure({Lemniscate{ComplexPolynomial({Cd(0), Cd(0), Cd(1)}), 0, nullptr}}, Cd(1, 0), 0.5),
      12);
}

TEST_CASE("gram entries are linear in the weight") {
  auto one = [](const Complex&) { return Real(1); };
  auto two = [](const Complex&) { return Real(2); };
  PowerWeightMeasure mu1 = make_measure({RealInterval{-1, 1}}, Cd(0.25, 0), 0.5, one);
  PowerWeightMeasure mu2 = make_measure({RealInterval{-1, 1}}, Cd(0.25, 0), 0.5, two);
  GramSystem s1 = gram(mu1, 8, GramBasis::chebyshev_mapped, 192);
  GramSystem s2 = gram(mu2, 8, GramBasis::chebyshev_mapped, 192);
  PrecisionGuard guard(192);
  for (int j = 0; j <= 8; ++j)
    for (int k = 0; k <= 8; ++k) {
      Real diff = abs(s2.entries(j, k) - Complex(Real(2)) * s1.entries(j, k));
      CHECK(to_double(diff) <= 1e-40);
    }
}

TEST_CASE("sqrt pullback maps exponents and preserves mass") {
  PrecisionGuard guard(192);
  Real tol(1e-14);

  // Lebesgue on [0,1] pulls back to |y| dy on [-1,1].
  PowerWeightMeasure leb = make_measure({RealInterval{0, 1}}, Cd(0, 0), 0.0);
  PowerWeightMeasure pulled = sqrt_pullback(leb);
  const auto& iv = std::get<RealInterval>(pulled.components[0]);
  CHECK(iv.a == -1.0);
  CHECK(iv.b == 1.0);
  CHECK(pulled.alpha == 1.0);
  CHECK_FALSE(pulled.z0_at_endpoint);

  // exponent (alpha-1)/2 pulls back to exponent alpha
  double alpha = 0.5;
  PowerWeightMeasure half = make_measure({RealInterval{0, 1}}, Cd(0, 0), (alpha - 1) / 2);
  CHECK(sqrt_pullback(half).alpha == alpha);

  for (double a : {-0.5, 0.0, 1.0, 2.0}) {
    PowerWeightMeasure mu = make_measure({RealInterval{0, 1}}, Cd(0, 0), a);
    CHECK(rel_err(total_mass(sqrt_pullback(mu), tol), total_mass(mu, tol)) <= 1e-10);
  }

  // total mass 2/3 at alpha = 1/2 on both sides of the map
  PowerWeightMeasure mu = make_measure({RealInterval{0, 1}}, Cd(0, 0), 0.5);
  CHECK(rel_err(total_mass(mu, tol), Real(2) / 3) <= 1e-12);
  CHECK(rel_err(total_mass(sqrt_pullback(mu), tol), Real(2) / 3) <= 1e-10);

  CHECK_THROWS_AS(sqrt_pullback(make_measure({RealInterval{-1, 1}}, Cd(0, 0), 0.0)),
                  UnsupportedGeometryError);
}
