#pragma once

#include "blowup/field.hpp"

namespace blowup {

/// Problem parameters. b and kappa are derived from p, never set directly.
struct Params {
  double p;
  int N;

  explicit Params(double p_ = 3.0, int N_ = 1) : p(p_), N(N_) {
    if (!(p > 1.0)) throw std::invalid_argument("Params: p must be > 1");
    if (N < 1) throw std::invalid_argument("Params: N must be >= 1");
  }

  double b() const { return (p - 1.0) * (p - 1.0) / (4.0 * p); }
  double kappa() const { return std::pow(p - 1.0, -1.0 / (p - 1.0)); }
};

/// The change of variables y = x/sqrt(T-t), s = -ln(T-t),
/// w = (T-t)^{1/(p-1)} u.
struct SimilarityFrame {
  double T;
  Params params;

  SimilarityFrame(double T_, const Params& pr) : T(T_), params(pr) {
    if (!(T > 0.0)) throw std::invalid_argument("SimilarityFrame: T must be > 0");
  }

  double s_of_t(double t) const {
    if (!(t < T)) throw std::invalid_argument("SimilarityFrame: need t < T");
    return -std::log(T - t);
  }
  double t_of_s(double s) const { return T - std::exp(-s); }
  double y_of_x(double x, double t) const { return x / std::sqrt(T - t); }
  double x_of_y(double y, double s) const { return y * std::exp(-0.5 * s); }
  double w_scale(double t) const { return std::pow(T - t, 1.0 / (params.p - 1.0)); }
};

struct ValueGrad {
  double value;
  double gradient;
};

/// Blow-up profile phi(y,s) = (p-1 + b y^2/s)^{-1/(p-1)} + kappa N/(2 p s).
double profile_phi(double y, double s, const Params& pr);

/// Self-similar profile phi_0(z) = (p-1 + b z^2)^{-1/(p-1)} with its
/// analytic derivative.
ValueGrad profile_phi0(double z, const Params& pr);

/// V = p (phi^{p-1} - 1/(p-1)).
double potential_V(double y, double s, const Params& pr);

/// B(q) = |q+phi|^{p-1}(q+phi) - phi^p - p phi^{p-1} q.
double nonlinear_B(double q, double y, double s, const Params& pr);

/// R = -d_s phi + Lap phi - y/2 . grad phi - phi/(p-1) + |phi|^{p-1} phi,
/// with the phi derivatives in closed form.
double remainder_R(double y, double s, const Params& pr);

/// Physical -> similarity frame map with linear remap onto the y-grid.
Field to_similarity(const Field& u, double t, double T, const Grid& y_grid, const Params& pr);

/// Inverse map, similarity -> physical on the given x-grid.
Field from_similarity(const Field& w, double s, double T, const Grid& x_grid, const Params& pr);

}  // namespace blowup
