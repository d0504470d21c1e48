#pragma once

#include <functional>
#include <vector>

#include "blowup/field.hpp"

namespace blowup {

/// Multi-index of the Hermite eigenbasis; the default build is 1-D so a
/// single component suffices.
struct HermiteIndex {
  int beta = 0;
  int order() const { return beta; }
};

/// Rescaled Hermite polynomial h_ell for the Gaussian weight
/// rho(y) = e^{-y^2/4}/sqrt(4 pi):
///   h_ell(xi) = sum_j (-1)^j ell!/(j!(ell-2j)!) xi^{ell-2j}.
double hermite_poly(int ell, double xi);

/// Eigenvalue of L = Laplacian - y/2 . grad + Id on the h_m eigenspace.
inline double eigenvalue(int m) { return 1.0 - 0.5 * m; }

/// ||h_ell||^2 in L^2_rho. Closed form 2^ell ell!, validated against the
/// quadrature oracle in the test suite.
double hermite_norm_sq(int ell);

/// Quadrature nodes/weights for integrals against rho. Weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int degree = 0;  // max polynomial degree integrated exactly

  /// Gauss-Hermite rule rescaled from weight e^{-x^2} to rho(y); the node
  /// scaling is y = 2x. Exact for polynomials of degree <= 2n-1.
  static QuadratureRule gauss_hermite(int n = 64);
};

/// integral of f rho dy via the given rule.
double weighted_integral(const std::function<double(double)>& f, const QuadratureRule& rule);

/// integral of f rho dy for a grid-sampled field, by trapezoid on its own
/// grid (spectrally accurate for smooth decaying integrands).
double weighted_integral(const Field& f);

/// e^{theta L} f via the explicit Gaussian (Mehler) kernel: amplify by
/// e^theta, contract the argument by e^{-theta/2} and convolve with a
/// centered Gaussian of variance 2(1 - e^{-theta}). Eigenfunctions are
/// mapped exactly: e^{theta L} h_m = e^{(1-m/2) theta} h_m.
Field semigroup_apply(double theta, const Field& f);

}  // namespace blowup
