#pragma once

// Discretizations of an interval-union support around an interior point z0,
// and the test products built from them:
//
//   A_n(z) = prod over 0 < |k| <= N of (1 - (z - z0)/(a_k - z0)),
//   B_n(z) = prod over |k| > N     of (1 - (z - z0)/(xi_k - z0)),
//   C_n    = A_n * B_n,            so C_n(z0) = 1 exactly.
//
// The a_k sit where the cumulative equilibrium measure from z0 reaches
// j_{beta,|k|}/(pi n), beta = (alpha+1)/2 -- the zero pattern of the
// normalized Bessel kernel Jcal_beta.  The xi_k are the equilibrium mass
// centers of a division of the support into cells of mass 1/n, with the cell
// containing z0 centered on it.  Near z0, A_n tracks Jcal_beta(n pi omega(z0)
// (z - z0)) while B_n stays near 1; verify_local_behavior measures how well
// this holds at a given n and compares the scaled window integral of |C_n|^2
// d mu against the interior limit constant.

#include "ccf/complex.hpp"
#include "ccf/equilibrium.hpp"
#include "ccf/measure.hpp"
#include "ccf/real.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ccf {

// Default window exponent: (15.5 + alpha)/(16.5 + alpha).  Any tau with
// (15 + alpha)(1 - tau) < tau makes the two window scales compatible; this
// choice satisfies that with a small margin uniformly in alpha.
double default_tau(double alpha);

struct DivisionScheme {
  int n = 0;
  double alpha = 0;
  double beta = 0.5;  // (alpha + 1)/2
  double tau = 0;     // window exponent in (0, 1)
  double rho = 0;     // (alpha + 9)(1 - tau): exclusion-window exponent
  int big_n = 0;      // N = floor(n^{3(1 - tau)})
  Complex z0;

  // a_{-k0} < ... < a_0 = z0 < ... < a_{k1}: cumulative equilibrium mass
  // from z0 to a_k equals j_{beta,|k|}/(pi n); truncated at the support edge.
  std::vector<Complex> a_points;
  std::size_t a_zero = 0;  // index of a_0 = z0

  // Equal-mass cell boundaries and per-cell mass centers; xi_points[i] is
  // the center of the cell (b_points[i], b_points[i+1]).  Interior cells
  // carry mass exactly 1/n; the two outermost cells are remainders.
  std::vector<Complex> b_points;
  std::vector<Complex> xi_points;
  std::size_t xi_zero = 0;  // the cell containing z0 (excluded from B_n)
};

struct BesselDivision {
  std::vector<Complex> points;  // ascending; includes z0 itself
  std::size_t zero_index = 0;   // position of z0
};

// Division points a_k on both sides of z0 with cumulative equilibrium mass
// j_{beta,|k|}/(pi n); the list is truncated where the support runs out of
// mass (a point that lands on the edge within tolerance is kept).  Requires
// an interval-union density and z0 strictly inside one of the intervals.
BesselDivision bessel_division(const EquilibriumDensity& eq, const Complex& z0, int n,
                               double beta);

struct EqualMassDivision {
  std::vector<Complex> b_points;
  std::vector<Complex> xi_points;
  std::size_t xi_zero = 0;
};

// Division of the support into cells of equilibrium mass 1/n: the cell
// containing z0 is chosen so that its mass center is z0; full cells of mass
// 1/n extend outward from it, with remainder cells (< 1/n) at the edges.
// Each xi is the equilibrium mass center of its cell.
EqualMassDivision equal_mass_division(const EquilibriumDensity& eq, const Complex& z0, int n);

// Builds both divisions and the derived exponents for one n.  tau defaults
// to default_tau(alpha); the scheme must end up with at least N Bessel points
// and more than N cells on each side of z0, else the ladder point is too
// small for the chosen tau and this throws.
DivisionScheme make_scheme(const EquilibriumDensity& eq, const Complex& z0, int n, double alpha,
                           std::optional<double> tau = {});

struct CnValue {
  Complex a;
  Complex b;
  Complex c;
};

// Evaluates A_n, B_n, C_n at z.  Factors are accumulated with explicit
// base-2 exponent tracking, so magnitudes far outside double range cannot
// overflow; a z coinciding with a node yields an exact zero.
CnValue build_Cn(const DivisionScheme& scheme, const Complex& z);

// Measured local behavior of the construction at one ladder point.
struct LocalReport {
  int n = 0;
  double tau = 0;
  double rho = 0;
  int big_n = 0;
  double max_b_dev = 0;        // max |B_n - 1| over the window |z-z0| <= n^{-tau}
  double max_a_dev = 0;        // max |A_n - Jcal|/(1 + |Jcal|) off the zero windows
  double sup_c = 0;            // sup |C_n| over support samples
  double scaled_integral = 0;  // n^{alpha+1} * window integral of |C_n|^2 d mu
  double limit_constant = 0;   // w(z0) L_alpha / (pi omega(z0))^{alpha+1}
  double ratio = 0;            // scaled_integral / limit_constant
};

struct LocalBehaviorConfig {
  std::optional<double> tau;  // override the default window exponent
  int near_samples = 801;     // grid on the window around z0
  int support_samples = 1201; // grid per support interval for sup |C_n|
  double quad_tol = 1e-8;     // tolerance of the window integral
};

// Runs the construction for each n and reports the measured quantities.
// The kernel comparison excludes 1/n^{1+rho}-windows around the scaled
// kernel zeros, where A_n vanishes at a slightly shifted spot.  Requires an
// interval-union measure with z0 in the interior, matching eq.
std::vector<LocalReport> verify_local_behavior(const PowerWeightMeasure& mu,
                                               const EquilibriumDensity& eq,
                                               const std::vector<int>& n_list,
                                               const LocalBehaviorConfig& cfg = {});

}  // namespace ccf
