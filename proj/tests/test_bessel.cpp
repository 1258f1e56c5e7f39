#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ccf/bessel.hpp"
#include "ccf/quadrature.hpp"

#include <cmath>

using namespace ccf;

TEST_CASE("Bessel J special values") {
  CHECK(bessel_j(0, 0) == 1.0);
  CHECK(std::abs(bessel_j(0.5, M_PI / 2) - 2 / M_PI) <= 1e-14);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) <= 1e-12);
}

TEST_CASE("Bessel J against an independent high-precision reference") {
  // Values computed with 40-digit arithmetic from the defining series /
  // analytic continuation, rounded to 20 significant digits.
  struct Ref {
    double beta, x, value;
  };
  const Ref refs[] = {
      {0, 0.3, 0.97762624653829608757},
      {0, 1, 0.76519768655796655145},
      {0, 5, -0.17759677131433830435},
      {0, 11, -0.17119030040719608835},
      {0, 14, 0.17107347611045865906},
      {0, 20, 0.16702466434058315473},
      {0, 50, 0.055812327669251815005},
      {0, 200, -0.015437439930565091592},
      {0, 1000, 0.024786686152420174561},
      {0.5, 0.3, 0.43049351732812456502},
      {0.5, 1, 0.67139670714180309042},
      {0.5, 5, -0.34216798479816180976},
      {0.5, 11, -0.24056889072320311853},
      {0.5, 14, 0.21124069716285923437},
      {0.5, 20, 0.16288076385502987091},
      {0.5, 50, -0.029605831888924612568},
      {0.5, 200, -0.049270523842854474976},
      {0.5, 1000, 0.02086326660509382773},
      {1, 0.3, 0.14831881627310400774},
      {1, 1, 0.44005058574493351596},
      {1, 5, -0.32757913759146522204},
      {1, 11, -0.17678529895672150114},
      {1, 14, 0.13337515469879325311},
      {1, 20, 0.066833124175850045579},
      {1, 50, -0.097511828125175137661},
      {1, 200, -0.054304538182378222711},
      {1, 1000, 0.0047283119070895239176},
      {1.7, 0.3, 0.025520652110099524134},
      {1.7, 1, 0.18141766505664451685},
      {1.7, 5, -0.085089767345250386562},
      {1.7, 11, 0.04568510333565596969},
      {1.7, 14, -0.074807493959288454295},
      {1.7, 20, -0.11077234771958567197},
      {1.7, 50, -0.096030564062553749358},
      {1.7, 200, -0.011281173193421614829},
      {1.7, 1000, -0.019921778466774372234},
      {3.2, 0.3, 0.00029613370659734854459},
      {3.2, 1, 0.013213773612850163589},
      {3.2, 5, 0.39195960842034329995},
      {3.2, 11, 0.19711844543316764815},
      {3.2, 14, -0.1377481761886226773},
      {3.2, 20, -0.053201568919917871562},
      {3.2, 50, 0.10771509103469677533},
      {3.2, 200, 0.04763215075990345099},
      {3.2, 1000, 0.0030462115517529526838},
  };
  for (const Ref& r : refs) {
    CAPTURE(r.beta);
    CAPTURE(r.x);
    CHECK(std::abs(bessel_j(r.beta, r.x) - r.value) <= 1e-13);
  }
}

TEST_CASE("normalized kernel values") {
  for (double beta : {0.5, 1.0, 2.3}) CHECK(kernel_jcal(beta, 0) == 1.0);
  CHECK(std::abs(kernel_jcal(0.5, M_PI)) <= 1e-14);
  CHECK(std::abs(kernel_jcal(0.5, M_PI / 2) - 2 / M_PI) <= 1e-14);
  // At order 1/2 the kernel collapses to sin(z)/z.
  for (double z = 0.25; z <= 40; z += 0.75)
    CHECK(std::abs(kernel_jcal(0.5, z) - std::sin(z) / z) <= 1e-13);
  // Evenness.
  CHECK(kernel_jcal(1.3, -2.7) == kernel_jcal(1.3, 2.7));
}

TEST_CASE("series and asymptotic branches agree on the overlap band") {
  // The asymptotic branch carries an optimal-truncation error ~e^{-2x}, so
  // the agreement tolerance tightens as x grows across the band.
  for (double beta : {0.5, 1.0, 1.7, 3.2}) {
    for (double x = 8; x <= 16.0001; x += 0.5) {
      double from_series = detail::bessel_j_series(beta, x);
      double from_asymptotic = detail::bessel_j_asymptotic(beta, x);
      double tol = std::max(1e-13, 3 * std::exp(-2 * x));
      CAPTURE(beta);
      CAPTURE(x);
      CHECK(std::abs(from_series - from_asymptotic) <= tol);
    }
  }
}

TEST_CASE("zeros of the half-integer kernel are multiples of pi") {
  for (int k = 1; k <= 20; ++k) {
    CHECK(std::abs(bessel_zero(0.5, k) - k * M_PI) <= 1e-12);
  }
}

TEST_CASE("first zeros at order zero match the reference") {
  const double refs[] = {2.4048255576957727686, 5.5200781102863106496, 8.653727912911012217,
                         11.791534439014281614, 14.930917708487785948, 18.071063967910922543,
                         21.211636629879258959, 24.352471530749302737, 27.493479132040254796,
                         30.634606468431975118};
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(bessel_zero(0, k) - refs[k - 1]) <= 1e-12);
}

TEST_CASE("zeros at a fractional order match the reference") {
  CHECK(std::abs(bessel_zero(1.3, 1) - 4.2314486851895172855) <= 1e-12);
  CHECK(std::abs(bessel_zero(1.3, 2) - 7.4437443136798133274) <= 1e-12);
  CHECK(std::abs(bessel_zero(1.3, 5) - 16.922108624229372192) <= 1e-12);
  CHECK(std::abs(bessel_zero(1.3, 20) - 64.07725473636190931) <= 1e-12);
}

TEST_CASE("zero asymptotics: distance to the angular seed decreases in k") {
  for (double beta : {0.8, 1.3}) {
    double prev = 1e300;
    for (int k = 5; k <= 20; ++k) {
      double err = std::abs(bessel_zero(beta, k) - (k + 0.5 * beta - 0.25) * M_PI);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("zero interlacing across consecutive orders") {
  for (double beta : {0.3, 1.1}) {
    for (int k = 1; k <= 12; ++k) {
      CHECK(bessel_zero(beta, k) < bessel_zero(beta + 1, k));
      CHECK(bessel_zero(beta + 1, k) < bessel_zero(beta, k + 1));
    }
  }
}

TEST_CASE("truncated zero-product converges to the kernel") {
  const double zs[] = {0.6, 1.9, 3.3, 4.7};
  for (double beta : {0.5, 1.2}) {
    double prev_max = 1e300;
    for (int cap : {50, 100, 200}) {
      double max_err = 0;
      for (double z : zs) {
        double prod = 1;
        for (int k = 1; k <= cap; ++k) {
          double j = bessel_zero(beta, k);
          prod *= 1 - z * z / (j * j);
        }
        max_err = std::max(max_err, std::abs(prod - kernel_jcal(beta, z)));
      }
      CHECK(max_err < prev_max);
      prev_max = max_err;
    }
  }
}

TEST_CASE("limit constant L_alpha") {
  PrecisionGuard guard(256);
  CHECK(to_double(abs(l_alpha(Real(0)) - const_pi())) <= 1e-30);
  CHECK(to_double(abs(l_alpha(Real(1)) - 4)) <= 1e-30);
  // 2^{1/2} Gamma(1/4) Gamma(5/4), 25-digit reference
  Real ref("4.647476009400966922629425");
  CHECK(to_double(abs(l_alpha(Real(-0.5)) - ref) / ref) <= 1e-20);
}

TEST_CASE("kernel square integral reference values") {
  PrecisionGuard guard(192);
  // alpha = 0: integrand (sin x / x)^2; references from 40-digit quadrature.
  CHECK(std::abs(to_double(kernel_square_integral(Real(0), Real(1))) - 1.7946791170582473102) <=
        1e-10);
  CHECK(std::abs(to_double(kernel_square_integral(Real(0), Real(50))) - 3.1216973112238662654) <=
        1e-9);
  CHECK(std::abs(to_double(kernel_square_integral(Real(0), Real(200))) - 3.1366032568544108237) <=
        1e-9);
  CHECK(std::abs(to_double(kernel_square_integral(Real(1), Real(50))) - 3.949505709823305485) <=
        1e-8);

  // Window bound: pi - 2/A <= value <= pi at alpha = 0, A = 50.
  double v = to_double(kernel_square_integral(Real(0), Real(50)));
  CHECK(v >= M_PI - 2.0 / 50);
  CHECK(v <= M_PI);
}

TEST_CASE("kernel square integral is monotone in the window and bounded by L_alpha") {
  PrecisionGuard guard(192);
  for (double alpha : {-0.5, 0.0, 1.0, 2.0}) {
    Real bound = l_alpha(Real(alpha)) * (1 + Real(1e-9));
    Real prev(-1);
    for (double A : {1.0, 5.0, 20.0, 50.0, 120.0, 200.0}) {
      Real v = kernel_square_integral(Real(alpha), Real(A));
      CHECK(v >= prev);
      CHECK(v <= bound);
      prev = v;
    }
  }
}
