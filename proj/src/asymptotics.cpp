#include "ccf/asymptotics.hpp"

#include "ccf/bessel.hpp"
#include "ccf/errors.hpp"

#include <cstddef>
#include <limits>

namespace ccf {

Prediction predict_interior(const Real& w0, const Real& omega0, const Real& alpha) {
  if (!(w0 > 0)) throw InvalidInputError("predict_interior: need w0 > 0");
  if (!(omega0 > 0)) throw InvalidInputError("predict_interior: need omega0 > 0");
  if (!(alpha > -1)) throw InvalidInputError("predict_interior: need alpha > -1");
  Prediction p;
  p.kind = Prediction::Kind::interior;
  p.kappa = alpha + 1;
  p.limit = w0 * l_alpha(alpha) / pow_real(const_pi() * omega0, alpha + 1);
  p.w0 = w0;
  p.scale = omega0;
  p.alpha = alpha;
  return p;
}

Prediction predict_endpoint(const Real& w0, const Real& M, const Real& alpha) {
  if (!(w0 > 0)) throw InvalidInputError("predict_endpoint: need w0 > 0");
  if (!(M > 0)) throw InvalidInputError("predict_endpoint: need M > 0");
  if (!(alpha > -1)) throw InvalidInputError("predict_endpoint: need alpha > -1");
  Prediction p;
  p.kind = Prediction::Kind::endpoint;
  p.kappa = 2 * alpha + 2;
  p.limit = w0 * tgamma(alpha + 1) * tgamma(alpha + 2) /
            pow_real(const_pi() * M, 2 * alpha + 2);
  p.w0 = w0;
  p.scale = M;
  p.alpha = alpha;
  return p;
}

Extrapolation extrapolate(const std::vector<std::pair<int, Real>>& pairs) {
  using std::abs;
  using std::sqrt;
  if (pairs.size() < 3) throw InvalidInputError("extrapolate: need at least 3 pairs");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first < 1) throw InvalidInputError("extrapolate: need n >= 1");
    if (i > 0 && pairs[i].first < pairs[i - 1].first)
      throw InvalidInputError("extrapolate: n must be non-decreasing");
  }

  const std::size_t count = (pairs.size() + 1) / 2;
  const std::size_t first = pairs.size() - count;

  Real s0(static_cast<double>(count)), s1(0), s2(0), t0(0), t1(0);
  for (std::size_t i = first; i < pairs.size(); ++i) {
    Real x = Real(1) / pairs[i].first;
    const Real& y = pairs[i].second;
    s1 += x;
    s2 += x * x;
    t0 += y;
    t1 += x * y;
  }

  Extrapolation out;
  Real det = s0 * s2 - s1 * s1;
  if (!(det > 0)) {
    out.limit = pairs.back().second;
    out.residual = std::numeric_limits<double>::infinity();
    out.degenerate = true;
    return out;
  }

  Real c0 = (s2 * t0 - s1 * t1) / det;
  Real c1 = (s0 * t1 - s1 * t0) / det;
  Real rss(0);
  for (std::size_t i = first; i < pairs.size(); ++i) {
    Real r = pairs[i].second - c0 - c1 / pairs[i].first;
    rss += r * r;
  }
  out.limit = c0;
  out.residual = sqrt(rss / s0);
  out.degenerate = false;
  return out;
}

}  // namespace ccf
