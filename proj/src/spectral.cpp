#include "blowup/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace blowup {

double hermite_poly(int ell, double xi) {
  if (ell < 0) throw std::invalid_argument("hermite_poly: ell must be >= 0");
  // Three-term recurrence for the rescaled family: h_{k+1} = xi h_k - 2k h_{k-1}.
  double hm1 = 0.0, h = 1.0;
  for (int k = 0; k < ell; ++k) {
    double next = xi * h - 2.0 * k * hm1;
    hm1 = h;
    h = next;
  }
  return h;
}

double hermite_norm_sq(int ell) {
  if (ell < 0) throw std::invalid_argument("hermite_norm_sq: ell must be >= 0");
  double r = 1.0;
  for (int k = 1; k <= ell; ++k) r *= 2.0 * k;
  return r;  // 2^ell ell!
}

QuadratureRule QuadratureRule::gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
  // Golub-Welsch for the physicists' weight e^{-x^2}: Jacobi matrix has zero
  // diagonal and off-diagonal sqrt(k/2).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(0.5 * k);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    // rho(y) = e^{-y^2/4}/sqrt(4 pi) pulls back to e^{-x^2}/sqrt(pi) under
    // y = 2x, so the normalized weights are the squared first components.
    rule.nodes[i] = 2.0 * es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  return rule;
}

double weighted_integral(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  if (!std::isfinite(acc))
    throw std::runtime_error("weighted_integral: non-finite result (integrand overflow at a node)");
  return acc;
}

double weighted_integral(const Field& f) {
  const Grid& g = f.grid;
  const double h = g.spacing();
  const double c = 1.0 / std::sqrt(4.0 * M_PI);
  double acc = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    double y = g.node(i);
    double w = (i == 0 || i == g.n_points - 1) ? 0.5 : 1.0;
    acc += w * f[i] * c * std::exp(-0.25 * y * y);
  }
  acc *= h;
  if (!std::isfinite(acc))
    throw std::runtime_error("weighted_integral: non-finite result");
  return acc;
}

Field semigroup_apply(double theta, const Field& f) {
  if (!(theta > 0.0)) throw std::invalid_argument("semigroup_apply: theta must be > 0");
  const Grid& g = f.grid;
  const double var = 2.0 * (1.0 - std::exp(-theta));
  const double sigma = std::sqrt(var);
  const double contract = std::exp(-0.5 * theta);
  const double amp = std::exp(theta);
  const double h = g.spacing();
  const double reach = 8.0 * sigma;  // kernel truncation
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);

  Field out(g, f.frame, f.time);
  for (int i = 0; i < g.n_points; ++i) {
    const double a = contract * g.node(i);
    // Trapezoid over grid nodes within the truncation window, with the
    // field extended by its boundary values.
    int j0 = static_cast<int>(std::floor((a - reach + g.y_max) / h));
    int j1 = static_cast<int>(std::ceil((a + reach + g.y_max) / h));
    double acc = 0.0, wsum = 0.0;
    for (int j = j0; j <= j1; ++j) {
      double x = -g.y_max + j * h;
      double z = (a - x) / sigma;
      double k = norm * std::exp(-0.5 * z * z);
      int jc = j < 0 ? 0 : (j >= g.n_points ? g.n_points - 1 : j);
      acc += k * f[jc];
      wsum += k;
    }
    // Normalizing by the discrete kernel mass keeps constants exact and
    // removes the trapezoid endpoint bias.
    out[i] = amp * acc / (wsum > 0.0 ? wsum * h : 1.0) * h;
  }
  return out;
}

}  // namespace blowup
