#pragma once

// The Christoffel function
//   lambda_n(mu, z0) = inf { integral |P|^2 dmu : deg P <= n, P(z0) = 1 },
// computed as 1/(v^H G^{-1} v) from the Gram matrix G of a degree-graded
// basis and the basis-evaluation vector v at z0, through one Hermitian
// Cholesky solve.
//
// Precision policy: the solve runs on a doubling ladder of working
// precisions.  An attempt counts only if the Cholesky residual is below
// 2^{-bits/2}; the engine returns once two consecutive valid attempts agree,
// reporting their relative deviation as the error estimate.  A sweep factors
// the Gram matrix once at the largest degree and serves every smaller degree
// from its leading principal blocks.

#include "ccf/measure.hpp"
#include "ccf/real.hpp"

#include <optional>
#include <vector>

namespace ccf {

struct ChristoffelResult {
  int n = 0;
  Real lambda;
  unsigned precision_bits_used = 0;
  double error_estimate = 0;  // relative agreement of the two final attempts
  std::optional<std::vector<Cd>> extremal_coeffs;  // coefficients in the Gram basis
};

// Christoffel function at the measure's base point.  precision_bits seeds the
// escalation ladder (default 192).
ChristoffelResult lambda_n(const PowerWeightMeasure& mu, int n,
                           std::optional<unsigned> precision_bits = {});

// All of ns (ascending) against one factorization per precision rung.
std::vector<ChristoffelResult> lambda_sweep(const PowerWeightMeasure& mu,
                                            const std::vector<int>& ns,
                                            std::optional<unsigned> precision_bits = {});

// Basis coefficients of the minimizer K_n(z, z0)/K_n(z0, z0); evaluates to 1
// at z0, and its squared mu-norm equals lambda_n.
std::vector<Cd> extremal_polynomial(const PowerWeightMeasure& mu, int n);

}  // namespace ccf
