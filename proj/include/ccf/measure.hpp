#pragma once

// The measure model  d mu(z) = w(z) |z - z0|^alpha ds(z)  over a union of
// support components, its total mass, and Gram matrices of degree-graded
// polynomial bases against it.
//
// Gram assembly never integrates entry-by-entry.  Each geometry reduces the
// whole matrix to a one-dimensional family of integrals evaluated on a shared
// node set:
//   - real supports: modified Chebyshev moments, G[j][k] = (M_{j+k} + M_{|j-k|})/2
//   - circle / circular arc: Hermitian Toeplitz of Fourier coefficients
//   - lemniscate |T| = 1: block tables F_{j,j'}(m - m') for the basis z^j T^m
//     (conj(T) = 1/T on the curve)
// The node sets absorb the |z - z0|^alpha factor with Gauss-Jacobi panels, so
// entries are exact for polynomial weights and spectrally accurate otherwise;
// every table is built twice at different resolutions and compared.

#include "ccf/complex.hpp"
#include "ccf/errors.hpp"
#include "ccf/linalg.hpp"
#include "ccf/real.hpp"
#include "ccf/support.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ccf {

struct PowerWeightMeasure {
  std::vector<SupportComponent> components;
  Cd z0{0.0, 0.0};
  double alpha = 0;
  std::function<Real(const Complex&)> w;  // empty means identically 1
  std::string label;

  // Classification of z0, filled in by make_measure.
  int z0_component = -1;
  bool z0_at_endpoint = false;
  double z0_param = 0;
  Cd z0_snapped{0.0, 0.0};

  Real weight_at(const Complex& z) const { return w ? w(z) : Real(1); }
};

// Validates the geometry, snaps z0 onto its component, classifies it as an
// interior point or an arc endpoint, and spot-checks w > 0.
PowerWeightMeasure make_measure(std::vector<SupportComponent> components, Cd z0, double alpha,
                                std::function<Real(const Complex&)> w = {},
                                std::string label = {});

// mu(C) > 0, by singularity-aware quadrature at the active precision.
Real total_mass(const PowerWeightMeasure& mu, const Real& tol = Real(1e-14));

// The anchor of the |z - z0|^alpha factor, re-evaluated on the support at the
// active precision.  z0_snapped is its double shadow; quadrature must use this
// one, or the leftover off-curve offset poisons the singular panels.
Complex singular_center(const PowerWeightMeasure& mu);

enum class GramBasis {
  monomial,             // b_j = z^j (real supports and the unit circle only)
  chebyshev_mapped,     // b_j = T_j of the affinely mapped convex hull (real supports)
  laurent_symmetrized,  // b_j = ((z-c)/r)^j on circles/arcs, z^j T^m on lemniscates
};

// The basis the geometry calls for: chebyshev_mapped on real supports,
// laurent_symmetrized on circles/arcs/lemniscates, monomial otherwise.
GramBasis default_basis(const PowerWeightMeasure& mu);

// Heuristic working precision for a degree-n Gram problem.
inline unsigned default_precision_bits(int n) {
  unsigned bits = 16u * static_cast<unsigned>(n > 0 ? n : 0);
  return bits > 192u ? bits : 192u;
}

struct GramSystem {
  int n = 0;
  GramBasis basis = GramBasis::monomial;
  SquareMatrix<Complex> entries;  // (n+1) x (n+1), Hermitian positive definite
  unsigned precision_bits = 0;
  double quad_tol = 0;  // relative agreement achieved between the two builds

  // Evaluates b_0..b_n at a point, at the active precision.
  std::function<std::vector<Complex>(const Complex&)> basis_eval;
};

// Hermitian Gram matrix G[j][k] = integral of b_j conj(b_k) d mu, j,k <= n,
// assembled at the given precision.
GramSystem gram(const PowerWeightMeasure& mu, int n, GramBasis basis, unsigned precision_bits);

inline GramSystem gram(const PowerWeightMeasure& mu, int n) {
  return gram(mu, n, default_basis(mu), default_precision_bits(n));
}

// Square-root pullback: for a measure w(x)|x|^alpha dx on [0, b] with z0 = 0,
// returns the even measure w(y^2)|y|^{2 alpha + 1} dy on [-sqrt(b), sqrt(b)],
// which has the same total mass.
PowerWeightMeasure sqrt_pullback(const PowerWeightMeasure& mu);

}  // namespace ccf
