#pragma once

// Extended-precision scalar used throughout the library.
//
// Real is an MPFR-backed floating-point number whose precision is set at
// runtime.  The convention everywhere in this code base is scope-based:
// computations that need a particular precision install it with a
// PrecisionGuard and construct every intermediate quantity inside that scope.
// Freshly constructed variables pick up the active precision; assigning into
// an existing variable keeps the variable's own precision.  Nothing here (or
// anywhere else in the library) caches Real values across precision scopes.

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ccf {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// MPFR precision is configured in decimal digits by the backend; keep a tiny
// cushion so that "bits" requests are honored with room to spare.
inline unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(static_cast<double>(bits) * 0.30102999566398120) + 4;
}

inline unsigned current_precision_bits() {
  return static_cast<unsigned>(mpfr_get_prec(Real().backend().data()));
}

// RAII precision scope.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits) : saved_digits_(Real::default_precision()) {
    Real::default_precision(digits10_for_bits(std::max(bits, 64u)));
  }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;
  ~PrecisionGuard() { Real::default_precision(saved_digits_); }

 private:
  unsigned saved_digits_;
};

inline double to_double(const Real& x) { return x.convert_to<double>(); }

// Constants evaluated at the active precision (never cached).
inline Real const_pi() {
  Real x;
  mpfr_const_pi(x.backend().data(), MPFR_RNDN);
  return x;
}

// |x|^y for x >= 0, y real, at the active precision.
inline Real pow_real(const Real& x, const Real& y) {
  using std::pow;
  if (x < 0) throw std::domain_error("pow_real: negative base");
  if (x == 0) {
    if (y == 0) return Real(1);
    if (y < 0) throw std::domain_error("pow_real: 0 to a negative power");
    return Real(0);
  }
  return pow(x, y);
}

}  // namespace ccf
