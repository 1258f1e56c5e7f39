#include "ccf/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace ccf {

ComplexPolynomial::ComplexPolynomial(std::vector<Cd> c) : coeffs(std::move(c)) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  if (coeffs.empty()) throw InvalidInputError("ComplexPolynomial: empty coefficient list");
}

Cd ComplexPolynomial::eval(Cd z) const {
  Cd acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

Cd ComplexPolynomial::eval_derivative(Cd z) const {
  Cd acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + double(k) * coeffs[k];
  return acc;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
  if (coeffs.size() <= 1) return ComplexPolynomial({Cd(0)});
  std::vector<Cd> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = double(k) * coeffs[k];
  return ComplexPolynomial(std::move(d));
}

Complex ComplexPolynomial::eval(const Complex& z) const {
  Complex acc;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + Complex(coeffs[k]);
  return acc;
}

Complex ComplexPolynomial::eval_derivative(const Complex& z) const {
  Complex acc;
  for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + Complex(double(k) * coeffs[k]);
  return acc;
}

std::vector<Cd> polynomial_roots(const ComplexPolynomial& p, double tol) {
  const int n = p.degree();
  if (n < 1) return {};
  // Normalize to a monic polynomial for the iteration.
  std::vector<Cd> c(p.coeffs);
  Cd lead = c.back();
  for (auto& ck : c) ck /= lead;

  // Root magnitude bound (Cauchy): 1 + max |c_k|.
  double bound = 0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k]));
  bound = 1.0 + bound;

  // Standard non-real seed (powers of 0.4+0.9i scaled into the root bound)
  // so no seed coincides with a real root or another seed.
  std::vector<Cd> r(n);
  Cd seed(0.4, 0.9);
  Cd acc = 1;
  for (int i = 0; i < n; ++i) {
    acc *= seed;
    r[i] = acc * (0.5 * bound);
  }

  auto evalc = [&](Cd z) {
    Cd a = 0;
    for (std::size_t k = c.size(); k-- > 0;) a = a * z + c[k];
    return a;
  };

  const int max_iter = 500;
  for (int iter = 0; iter < max_iter; ++iter) {
    double step2 = 0;
    for (int i = 0; i < n; ++i) {
      Cd num = evalc(r[i]);
      Cd den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (r[i] - r[j]);
      Cd delta = num / den;
      r[i] -= delta;
      step2 += std::norm(delta);
    }
    if (step2 < tol * tol * std::max(1.0, bound * bound)) return r;
  }
  throw Error("polynomial_roots: Durand-Kerner failed to converge");
}

std::vector<Cd> preimages(const ComplexPolynomial& t, Cd w, double tol) {
  std::vector<Cd> c = t.coeffs;
  c[0] -= w;
  return polynomial_roots(ComplexPolynomial(std::move(c)), tol);
}

}  // namespace ccf
