#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ccf/asymptotics.hpp"
#include "ccf/bessel.hpp"
#include "ccf/errors.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

using namespace ccf;

namespace {

double rel_err(const Real& got, const Real& want) {
  using std::abs;
  Real scale = abs(want);
  if (scale < Real(1e-300)) scale = 1;
  return to_double(abs(got - want) / scale);
}

}  // namespace

TEST_CASE("interior prediction: closed forms") {
  PrecisionGuard guard(128);
  Real pi = const_pi();

  // Lebesgue measure on [-1,1] at the origin: omega = 1/pi, limit = pi.
  Prediction p = predict_interior(Real(1), 1 / pi, Real(0));
  CHECK(p.kind == Prediction::Kind::interior);
  CHECK(to_double(p.kappa) == 1.0);
  CHECK(rel_err(p.limit, pi) <= 1e-25);

  // Unit circle, omega = 1/(2 pi): limit = 2 pi at alpha = 0 and, in
  // general, 2^{alpha+1} L_alpha.
  CHECK(rel_err(predict_interior(Real(1), 1 / (2 * pi), Real(0)).limit, 2 * pi) <= 1e-25);
  for (double a : {-0.5, -0.25, 0.0, 1.0, 2.0}) {
    Real alpha(a);
    Prediction c = predict_interior(Real(1), 1 / (2 * pi), alpha);
    CHECK(rel_err(c.limit, pow_real(Real(2), alpha + 1) * l_alpha(alpha)) <= 1e-25);
    CHECK(rel_err(c.kappa, alpha + 1) <= 1e-30);
    CHECK(c.limit > 0);
    CHECK(c.kappa > 0);
  }

  // L_0 = pi: the alpha = 0 prediction collapses to pi * w0 / (pi * omega0).
  for (double w : {1.0, 0.37, 5.25}) {
    for (double om : {0.1, 0.31830988618367, 2.0}) {
      Prediction q = predict_interior(Real(w), Real(om), Real(0));
      CHECK(rel_err(q.limit, pi * Real(w) / (pi * Real(om))) <= 1e-25);
    }
  }
}

TEST_CASE("endpoint prediction: closed forms") {
  PrecisionGuard guard(128);
  Real pi = const_pi();
  Real sqrt2 = sqrt(Real(2));

  // [-1,1] at 1, alpha = 0: M = 1/(pi sqrt 2), limit = 2 matches the exact
  // Legendre value lambda_n(1) = 2/(n+1)^2.
  Prediction p = predict_endpoint(Real(1), 1 / (pi * sqrt2), Real(0));
  CHECK(p.kind == Prediction::Kind::endpoint);
  CHECK(to_double(p.kappa) == 2.0);
  CHECK(rel_err(p.limit, Real(2)) <= 1e-25);

  for (double a : {-0.5, 0.0, 1.0, 2.0}) {
    Real alpha(a);
    Real gg = tgamma(alpha + 1) * tgamma(alpha + 2);

    // [0,1] at 0 has M = 1/pi, so the (pi M) factor drops out.
    CHECK(rel_err(predict_endpoint(Real(1), 1 / pi, alpha).limit, gg) <= 1e-25);

    // [-1,1] at 1: M = 1/(pi sqrt 2) gives the extra 2^{alpha+1}.
    Prediction e = predict_endpoint(Real(1), 1 / (pi * sqrt2), alpha);
    CHECK(rel_err(e.limit, pow_real(Real(2), alpha + 1) * gg) <= 1e-25);
    CHECK(rel_err(e.kappa, 2 * alpha + 2) <= 1e-30);
    CHECK(e.limit > 0);
  }
}

TEST_CASE("predictions reject invalid inputs") {
  PrecisionGuard guard(128);
  CHECK_THROWS_AS(predict_interior(Real(0), Real(1), Real(0)), InvalidInputError);
  CHECK_THROWS_AS(predict_interior(Real(1), Real(-1), Real(0)), InvalidInputError);
  CHECK_THROWS_AS(predict_interior(Real(1), Real(1), Real(-1)), InvalidInputError);
  CHECK_THROWS_AS(predict_endpoint(Real(-2), Real(1), Real(0)), InvalidInputError);
  CHECK_THROWS_AS(predict_endpoint(Real(1), Real(0), Real(0)), InvalidInputError);
  CHECK_THROWS_AS(predict_endpoint(Real(1), Real(1), Real(-1.5)), InvalidInputError);
}

TEST_CASE("half-degree substitution ties the two regimes together") {
  PrecisionGuard guard(128);
  // For an endpoint with constant M, doubling the degree and halving the
  // scale turns the endpoint formula into an interior one of exponent
  // 2*alpha+1 evaluated with omega = M:
  //   2^{2 alpha + 2} * limit_endpoint(w0, M, alpha)
  //     = limit_interior(w0, M, 2 alpha + 1).
  for (double a : {-0.5, -0.25, 0.0, 0.75, 1.0, 2.0}) {
    for (double w : {1.0, 0.37}) {
      for (double m : {0.31830988618367, 0.8}) {
        Real alpha(a), w0(w), mm(m);
        Real lhs = pow_real(Real(2), 2 * alpha + 2) * predict_endpoint(w0, mm, alpha).limit;
        Real rhs = predict_interior(w0, mm, 2 * alpha + 1).limit;
        CHECK(rel_err(lhs, rhs) <= 1e-25);
      }
    }
  }
}

TEST_CASE("extrapolation: exact recovery and ladders") {
  PrecisionGuard guard(128);
  Real pi = const_pi();

  // Data exactly of the fitted form is recovered to full accuracy.
  {
    Real c0("2.5"), c1("-3.7");
    std::vector<std::pair<int, Real>> pairs;
    for (int n : {10, 20, 40, 80, 160}) pairs.push_back({n, c0 + c1 / n});
    Extrapolation fit = extrapolate(pairs);
    CHECK_FALSE(fit.degenerate);
    CHECK(rel_err(fit.limit, c0) <= 1e-12);
    CHECK(to_double(fit.residual) <= 1e-12);
  }

  // Legendre endpoint ladder: n^2 * 2/(n+1)^2 -> 2.
  {
    std::vector<std::pair<int, Real>> pairs;
    for (int n = 50; n <= 200; n += 25) {
      Real nn(n);
      pairs.push_back({n, nn * nn * 2 / ((nn + 1) * (nn + 1))});
    }
    Extrapolation fit = extrapolate(pairs);
    CHECK_FALSE(fit.degenerate);
    CHECK(rel_err(fit.limit, Real(2)) <= 1e-3);
  }

  // Circle Lebesgue ladder: n * 2 pi/(n+1) -> 2 pi.
  {
    std::vector<std::pair<int, Real>> pairs;
    for (int n = 50; n <= 200; n += 25) {
      Real nn(n);
      pairs.push_back({n, nn * 2 * pi / (nn + 1)});
    }
    Extrapolation fit = extrapolate(pairs);
    CHECK_FALSE(fit.degenerate);
    CHECK(rel_err(fit.limit, 2 * pi) <= 1e-3);
  }
}

TEST_CASE("extrapolation: input validation and degenerate fits") {
  PrecisionGuard guard(128);
  std::vector<std::pair<int, Real>> two{{1, Real(1)}, {2, Real(2)}};
  CHECK_THROWS_AS(extrapolate(two), InvalidInputError);

  std::vector<std::pair<int, Real>> decreasing{{4, Real(1)}, {2, Real(2)}, {8, Real(3)}};
  CHECK_THROWS_AS(extrapolate(decreasing), InvalidInputError);

  std::vector<std::pair<int, Real>> nonpositive{{0, Real(1)}, {2, Real(2)}, {8, Real(3)}};
  CHECK_THROWS_AS(extrapolate(nonpositive), InvalidInputError);

  // Repeated n in the fitted tail makes the normal equations singular; the
  // documented fallback is the last value with an infinite residual.
  std::vector<std::pair<int, Real>> repeated{{4, Real(1)}, {8, Real(2)}, {8, Real(3)}};
  Extrapolation fit = extrapolate(repeated);
  CHECK(fit.degenerate);
  CHECK(rel_err(fit.limit, Real(3)) == 0.0);
  CHECK(to_double(fit.residual) == std::numeric_limits<double>::infinity());
}
