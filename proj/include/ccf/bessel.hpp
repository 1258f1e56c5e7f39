#pragma once

// Bessel functions of the first kind with real order, the normalized even
// kernel Jcal_beta(z) = J_beta(z) * (2/z)^beta * Gamma(beta+1)  (value 1 at
// z = 0), its positive zeros, and the limit constants built from Gamma
// factors.
//
// Evaluation is double-precision (absolute accuracy ~1e-13 on [0, 1e3]):
// a hypergeometric series summed in binary128 below the switchover point
// max(16, 2*beta), the Hankel asymptotic expansion with optimal truncation
// beyond it.

#include "ccf/real.hpp"

#include <mutex>
#include <vector>

namespace ccf {

// J_beta(x) for beta > -1, x >= 0.
double bessel_j(double beta, double x);

// Jcal_beta(z) = J_beta(z) (2/z)^beta Gamma(beta+1); even in z, Jcal(0) = 1,
// defined for beta > -1.  For beta = 1/2 this is sin(z)/z.
double kernel_jcal(double beta, double z);

// Kernel of one order with a growable cache of its positive zeros.
class BesselKernel {
 public:
  explicit BesselKernel(double beta);

  double beta() const { return beta_; }
  double value(double z) const { return kernel_jcal(beta_, z); }

  // k-th positive zero j_{beta,k} (k >= 1), lazily computed and cached.
  double zero(int k) const;

 private:
  double beta_;
  mutable std::mutex mutex_;
  mutable std::vector<double> zeros_;
};

// j_{beta,k} through a process-wide kernel cache.
double bessel_zero(double beta, int k);

namespace detail {
// The two evaluation branches of bessel_j, exposed so they can be
// cross-checked against each other on the band where both are accurate.
double bessel_j_series(double beta, double x);      // accurate for x <~ 20
double bessel_j_asymptotic(double beta, double x);  // error ~ e^{-2x}
}  // namespace detail

// L_alpha = 2^{alpha+1} Gamma((alpha+1)/2) Gamma((alpha+3)/2), alpha > -1,
// at the active precision.  L_0 = pi, L_1 = 4.
Real l_alpha(const Real& alpha);

// integral_{-A}^{A} Jcal_{(alpha+1)/2}(x)^2 |x|^alpha dx.  The integrand is
// evaluated in double precision, so the result carries ~1e-12 accuracy.
Real kernel_square_integral(const Real& alpha, const Real& A);

}  // namespace ccf
