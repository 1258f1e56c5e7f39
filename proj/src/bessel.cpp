#include "ccf/bessel.hpp"

#include "ccf/errors.hpp"
#include "ccf/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>

namespace ccf {
namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;

double series_switchover(double beta) { return std::max(16.0, 2.0 * beta); }

// Jcal_beta(z) = sum_k (-z^2/4)^k / (k! (beta+1)_k), summed in binary128.
// The alternating sum loses ~z/2.3 decimal digits to cancellation; binary128
// keeps ~34, so the switchover at z ~ max(16, 2 beta) leaves ample headroom
// for the 1e-13 target.
double jcal_series(double beta, double z) {
  __float128 q = static_cast<__float128>(z) * z / 4;
  __float128 t = 1, s = 1;
  for (int k = 0; k < 700; ++k) {
    t = -t * q / ((static_cast<__float128>(k) + 1) * (static_cast<__float128>(beta) + 1 + k));
    s += t;
    __float128 at = t < 0 ? -t : t;
    __float128 as = s < 0 ? -s : s;
    if (at < static_cast<__float128>(1e-38) * (as + static_cast<__float128>(1e-20)) &&
        2 * k > z)
      return static_cast<double>(s);
  }
  return static_cast<double>(s);
}

// Hankel asymptotic expansion, optimally truncated.  The smallest neglected
// term is ~e^{-2x}, far below 1e-13 for x >= 16.
double bessel_hankel(double beta, double x) {
  long double mu = 4.0L * beta * beta;
  long double t = 1.0L;  // a_k / x^k, k = 0
  long double p = 1.0L, q = 0.0L;
  for (int k = 0; k + 1 < 80; ++k) {
    long double odd = 2.0L * k + 1;
    long double next = t * (mu - odd * odd) / (8.0L * (k + 1) * x);
    long double next_abs = next < 0 ? -next : next;
    long double t_abs = t < 0 ? -t : t;
    if (next_abs >= t_abs) break;  // past the optimal truncation point
    int idx = k + 1;
    if (idx % 2 == 1)
      q += (((idx - 1) / 2) % 2 == 0) ? next : -next;
    else
      p += ((idx / 2) % 2 == 0) ? next : -next;
    t = next;
    if (next_abs < 1e-25L) break;
  }
  long double omega = x - (0.5L * beta + 0.25L) * kPiL;
  return static_cast<double>(std::sqrt(2.0L / (kPiL * x)) *
                             (std::cos(omega) * p - std::sin(omega) * q));
}

}  // namespace

namespace detail {

double bessel_j_series(double beta, double x) {
  return jcal_series(beta, x) *
         static_cast<double>(std::pow(0.5L * x, static_cast<long double>(beta)) /
                             std::tgamma(static_cast<long double>(beta) + 1));
}

double bessel_j_asymptotic(double beta, double x) { return bessel_hankel(beta, x); }

}  // namespace detail

double bessel_j(double beta, double x) {
  if (!(beta > -1) || !(x >= 0)) throw InvalidInputError("bessel_j: need beta > -1, x >= 0");
  if (x == 0) {
    if (beta == 0) return 1.0;
    return beta > 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (x <= series_switchover(beta)) {
    // J = Jcal * (x/2)^beta / Gamma(beta+1)
    return jcal_series(beta, x) *
           static_cast<double>(std::pow(0.5L * x, static_cast<long double>(beta)) /
                               std::tgamma(static_cast<long double>(beta) + 1));
  }
  return bessel_hankel(beta, x);
}

double kernel_jcal(double beta, double z) {
  if (!(beta > -1)) throw InvalidInputError("kernel_jcal: need beta > -1");
  z = std::abs(z);
  if (z == 0) return 1.0;
  if (z <= series_switchover(beta)) return jcal_series(beta, z);
  return bessel_hankel(beta, z) *
         static_cast<double>(std::pow(2.0L / z, static_cast<long double>(beta)) *
                             std::tgamma(static_cast<long double>(beta) + 1));
}

BesselKernel::BesselKernel(double beta) : beta_(beta) {
  if (!(beta > -1)) throw InvalidInputError("BesselKernel: need beta > -1");
}

double BesselKernel::zero(int k) const {
  if (k < 1) throw InvalidInputError("BesselKernel::zero: need k >= 1");
  std::lock_guard<std::mutex> lock(mutex_);
  while (static_cast<int>(zeros_.size()) < k) {
    int idx = static_cast<int>(zeros_.size()) + 1;
    // McMahon seed with its first correction.
    double b = (idx + 0.5 * beta_ - 0.25) * M_PI;
    double mu = 4 * beta_ * beta_;
    double seed = b - (mu - 1) / (8 * b);

    auto f = [&](double x) { return bessel_j(beta_, x); };
    // J'_beta = (beta/x) J_beta - J_{beta+1}; this form stays inside the
    // domain of bessel_j for every beta > -1.
    auto df = [&](double x) { return beta_ / x * bessel_j(beta_, x) - bessel_j(beta_ + 1, x); };

    // Bracket around the seed (widening if needed), then safeguarded Newton.
    double lo = std::max(seed - 0.5 * M_PI, 1e-8);
    double hi = seed + 0.5 * M_PI;
    if (!zeros_.empty()) lo = std::max(lo, zeros_.back() + 1e-9);
    double flo = f(lo), fhi = f(hi);
    for (int widen = 0; widen < 16 && (flo < 0) == (fhi < 0); ++widen) {
      lo = std::max(lo - 0.25 * M_PI, 1e-8);
      if (!zeros_.empty()) lo = std::max(lo, zeros_.back() + 1e-9);
      hi += 0.25 * M_PI;
      flo = f(lo);
      fhi = f(hi);
    }
    if ((flo < 0) == (fhi < 0))
      throw Error("bessel zero: failed to bracket zero " + std::to_string(idx));

    double x = std::min(std::max(seed, lo), hi);
    for (int it = 0; it < 100; ++it) {
      double fx = f(x);
      if ((fx < 0) != (flo < 0))
        hi = x;
      else {
        lo = x;
        flo = fx;
      }
      double d = df(x);
      double nx = (d != 0) ? x - fx / d : 0.5 * (lo + hi);
      if (!(nx > lo) || !(nx < hi)) nx = 0.5 * (lo + hi);  // bisection fallback
      if (std::abs(nx - x) < 1e-15 * (1 + std::abs(x))) {
        x = nx;
        break;
      }
      x = nx;
    }
    zeros_.push_back(x);
  }
  return zeros_[k - 1];
}

namespace {
std::map<double, std::shared_ptr<const BesselKernel>> g_kernel_cache;
std::mutex g_kernel_mutex;
}  // namespace

double bessel_zero(double beta, int k) {
  std::shared_ptr<const BesselKernel> kernel;
  {
    std::lock_guard<std::mutex> lock(g_kernel_mutex);
    auto& slot = g_kernel_cache[beta];
    if (!slot) slot = std::make_shared<const BesselKernel>(beta);
    kernel = slot;
  }
  return kernel->zero(k);
}

Real l_alpha(const Real& alpha) {
  if (!(alpha > -1)) throw InvalidInputError("l_alpha: need alpha > -1");
  return pow_real(Real(2), alpha + 1) * tgamma((alpha + 1) / 2) * tgamma((alpha + 3) / 2);
}

Real kernel_square_integral(const Real& alpha, const Real& A) {
  if (!(alpha > -1)) throw InvalidInputError("kernel_square_integral: need alpha > -1");
  if (!(A > 0)) throw InvalidInputError("kernel_square_integral: need A > 0");
  const double beta = to_double(alpha + 1) / 2;
  auto f = [&](const Real& x) {
    double j = kernel_jcal(beta, to_double(x));
    return Real(j * j);
  };
  // Even integrand: twice the right half, singular weight |x|^alpha at 0.
  return 2 * integrate_singular(f, Real(0), A, Real(0), alpha, Real(1e-10));
}

}  // namespace ccf
