#include "ccf/christoffel.hpp"

#include "ccf/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ccf {
namespace {

constexpr unsigned kPrecisionCap = 1u << 15;
constexpr int kAgreeBits = 48;  // relative agreement demanded between rungs

struct Attempt {
  bool valid = false;
  std::vector<Real> lambdas;              // one per requested n
  std::vector<std::vector<Complex>> inv;  // G^{-1} v slices (only when asked)
  double condition_estimate = 0;
};

Attempt run_attempt(const PowerWeightMeasure& mu, const std::vector<int>& ns, unsigned bits,
                    bool want_solution) {
  PrecisionGuard guard(bits);
  const int n_max = ns.back();
  Attempt out;

  GramSystem sys = gram(mu, n_max, default_basis(mu), bits);
  SquareMatrix<Complex> l;
  try {
    l = cholesky(sys.entries);
  } catch (const IllConditionedError&) {
    return out;
  }
  {
    Real max_diag(0), min_pivot(0);
    for (int i = 0; i <= n_max; ++i) {
      Real d = sys.entries(i, i).re;
      if (i == 0 || d > max_diag) max_diag = d;
      Real p = l(i, i).re * l(i, i).re;
      if (i == 0 || p < min_pivot) min_pivot = p;
    }
    out.condition_estimate = to_double(max_diag / min_pivot);
  }
  Real resid = cholesky_residual(sys.entries, l, n_max + 1);
  if (!(resid < pow_real(Real(2), -Real(static_cast<int>(bits)) / 2))) return out;

  std::vector<Complex> v = sys.basis_eval(singular_center(mu));
  for (int n : ns) {
    std::size_t m = static_cast<std::size_t>(n) + 1;
    Real q = inverse_quadratic_form(l, v, m);
    if (!(q > 0)) return out;
    out.lambdas.push_back(1 / q);
    if (want_solution) {
      std::vector<Complex> y = forward_solve(l, v, m);
      out.inv.push_back(backward_solve_adjoint(l, y, m));
    }
  }
  out.valid = true;
  return out;
}

std::vector<ChristoffelResult> sweep_impl(const PowerWeightMeasure& mu, const std::vector<int>& ns,
                                          std::optional<unsigned> precision_bits,
                                          bool want_solution,
                                          std::vector<std::vector<Cd>>* coeffs_out) {
  if (ns.empty()) throw InvalidInputError("lambda_sweep: empty degree list");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 0) throw InvalidInputError("lambda_sweep: degrees must be >= 0");
    if (i > 0 && ns[i] <= ns[i - 1])
      throw InvalidInputError("lambda_sweep: degrees must be strictly ascending");
  }

  unsigned bits = std::min(precision_bits.value_or(192u), kPrecisionCap);
  if (bits < 64) bits = 64;

  Attempt prev;
  unsigned prev_bits = 0;
  double last_condition = 0;
  Real lambda_floor = pow_real(Real(10), Real(-300));

  while (true) {
    Attempt cur = run_attempt(mu, ns, bits, want_solution);
    if (cur.condition_estimate > 0) last_condition = cur.condition_estimate;
    if (cur.valid && prev.valid) {
      using std::abs;
      double worst = 0;
      for (std::size_t i = 0; i < ns.size(); ++i) {
        Real denom = abs(cur.lambdas[i]);
        if (denom < lambda_floor) denom = lambda_floor;
        worst = std::max(worst, to_double(abs(cur.lambdas[i] - prev.lambdas[i]) / denom));
      }
      if (worst <= std::ldexp(1.0, -kAgreeBits)) {
        std::vector<ChristoffelResult> results(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) {
          results[i].n = ns[i];
          results[i].lambda = cur.lambdas[i];
          results[i].precision_bits_used = bits;
          results[i].error_estimate = worst;
        }
        if (want_solution && coeffs_out) {
          coeffs_out->clear();
          PrecisionGuard guard(bits);
          for (std::size_t i = 0; i < ns.size(); ++i) {
            std::vector<Cd> c(cur.inv[i].size());
            for (std::size_t j = 0; j < c.size(); ++j) {
              Complex cj = cur.lambdas[i] * conj(cur.inv[i][j]);
              c[j] = cj.to_std();
            }
            (*coeffs_out).push_back(std::move(c));
          }
        }
        return results;
      }
    }
    if (cur.valid) {
      prev = std::move(cur);
      prev_bits = bits;
    }
    if (bits >= kPrecisionCap) break;
    bits = std::min(bits * 2, kPrecisionCap);
  }
  (void)prev_bits;
  throw IllConditionedError("lambda: no two precisions agreed below the precision cap",
                            last_condition,
                            prev.valid && !prev.lambdas.empty() ? to_double(prev.lambdas.back())
                                                                : 0.0);
}

}  // namespace

std::vector<ChristoffelResult> lambda_sweep(const PowerWeightMeasure& mu,
                                            const std::vector<int>& ns,
                                            std::optional<unsigned> precision_bits) {
  return sweep_impl(mu, ns, precision_bits, false, nullptr);
}

ChristoffelResult lambda_n(const PowerWeightMeasure& mu, int n,
                           std::optional<unsigned> precision_bits) {
  return sweep_impl(mu, {n}, precision_bits, false, nullptr).front();
}

std::vector<Cd> extremal_polynomial(const PowerWeightMeasure& mu, int n) {
  std::vector<std::vector<Cd>> coeffs;
  sweep_impl(mu, {n}, {}, true, &coeffs);
  return coeffs.front();
}

}  // namespace ccf
