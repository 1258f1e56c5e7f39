#pragma once

// Closed-form limit predictors for the two Christoffel asymptotic regimes,
// plus a small 1/n extrapolation helper for convergence ladders.
//
// Interior regime (evaluation point in the one-dimensional interior of the
// support, or anywhere on a closed curve):
//     n^{alpha+1} lambda_n  ->  w0 * L_alpha / (pi * omega0)^{alpha+1}
// where omega0 is the equilibrium density of the support at the point and
// L_alpha = 2^{alpha+1} Gamma((alpha+1)/2) Gamma((alpha+3)/2).
//
// Endpoint regime (evaluation point an endpoint of an arc of the support):
//     n^{2alpha+2} lambda_n  ->  w0 * Gamma(alpha+1) Gamma(alpha+2)
//                                   / (pi * M)^{2alpha+2}
// where M is the endpoint constant lim sqrt(|z - z0|) * omega(z).

#include "ccf/real.hpp"

#include <utility>
#include <vector>

namespace ccf {

// A predicted limit of n^kappa * lambda_n together with the data it was
// built from.
struct Prediction {
  enum class Kind { interior, endpoint };
  Kind kind;
  Real kappa;  // alpha+1 (interior) or 2*alpha+2 (endpoint); always > 0
  Real limit;  // always > 0
  Real w0;     // weight density at the evaluation point
  Real scale;  // omega0 (interior) or M (endpoint)
  Real alpha;
};

// limit = w0 * L_alpha / (pi * omega0)^{alpha+1}, kappa = alpha + 1.
// Requires w0 > 0, omega0 > 0, alpha > -1.
Prediction predict_interior(const Real& w0, const Real& omega0, const Real& alpha);

// limit = w0 * Gamma(alpha+1) Gamma(alpha+2) / (pi * M)^{2*alpha+2},
// kappa = 2*alpha + 2.  Requires w0 > 0, M > 0, alpha > -1.
Prediction predict_endpoint(const Real& w0, const Real& M, const Real& alpha);

// Result of fitting scaled ~ c0 + c1/n over the trailing half of a ladder.
struct Extrapolation {
  Real limit;       // fitted c0; the last sample when degenerate
  Real residual;    // rms misfit over the fitted points; +inf when degenerate
  bool degenerate;  // the normal equations were singular (e.g. repeated n)
};

// Least-squares fit of scaled_value ~ c0 + c1/n over the trailing half of
// the pairs (at least two points are always used).  Requires >= 3 pairs with
// non-decreasing n >= 1; repeated n values can make the fit degenerate, in
// which case the last scaled value is returned with an infinite residual.
Extrapolation extrapolate(const std::vector<std::pair<int, Real>>& pairs);

}  // namespace ccf
