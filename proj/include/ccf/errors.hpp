#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace ccf {

// Base class for all library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
// Scientific notation for diagnostics; std::to_string flattens small values
// to 0.000000, which hides the very number the message exists to report.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}
}  // namespace detail

// A quadrature routine could not reach the requested tolerance; carries the
// best estimate obtained and the error actually achieved.
struct QuadratureError : Error {
  QuadratureError(const std::string& msg, double best_value, double achieved_error)
      : Error(msg + " (best estimate " + detail::sci(best_value) + ", achieved error " +
              detail::sci(achieved_error) + ")"),
        best(best_value),
        achieved(achieved_error) {}
  double best;
  double achieved;
};

// Gram factorization failed even at the precision cap.
struct IllConditionedError : Error {
  IllConditionedError(const std::string& msg, double condition_estimate, double best_value)
      : Error(msg + " (condition estimate " + detail::sci(condition_estimate) + ")"),
        condition(condition_estimate),
        best(best_value) {}
  double condition;
  double best;
};

// Geometry the requested operation does not support.
struct UnsupportedGeometryError : Error {
  using Error::Error;
};

// Invalid measure / scenario / config input.
struct InvalidInputError : Error {
  using Error::Error;
};

}  // namespace ccf
