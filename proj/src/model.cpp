#include "blowup/model.hpp"

#include <cmath>
#include <stdexcept>

namespace blowup {

namespace {

void require_s(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("profile: need s > 1");
}

}  // namespace

double profile_phi(double y, double s, const Params& pr) {
  require_s(s);
  const double g = pr.p - 1.0 + pr.b() * y * y / s;
  return std::pow(g, -1.0 / (pr.p - 1.0)) + pr.kappa() * pr.N / (2.0 * pr.p * s);
}

ValueGrad profile_phi0(double z, const Params& pr) {
  const double p = pr.p, b = pr.b();
  const double g = p - 1.0 + b * z * z;
  const double v = std::pow(g, -1.0 / (p - 1.0));
  const double dv = -(2.0 * b * z / (p - 1.0)) * std::pow(g, -p / (p - 1.0));
  return {v, dv};
}

double potential_V(double y, double s, const Params& pr) {
  const double p = pr.p;
  const double phi = profile_phi(y, s, pr);
  return p * (std::pow(phi, p - 1.0) - 1.0 / (p - 1.0));
}

double nonlinear_B(double q, double y, double s, const Params& pr) {
  const double p = pr.p;
  const double phi = profile_phi(y, s, pr);
  const double u = q + phi;
  const double phi_pm1 = std::pow(phi, p - 1.0);
  return std::pow(std::abs(u), p - 1.0) * u - phi_pm1 * phi - p * phi_pm1 * q;
}

double remainder_R(double y, double s, const Params& pr) {
  require_s(s);
  const double p = pr.p, b = pr.b(), kappa = pr.kappa();
  const int N = pr.N;
  const double g = p - 1.0 + b * y * y / s;
  const double F = std::pow(g, -1.0 / (p - 1.0));            // g^{-1/(p-1)}
  const double Fp = std::pow(g, -p / (p - 1.0));             // g^{-p/(p-1)}
  const double Fpp = std::pow(g, -(2.0 * p - 1.0) / (p - 1.0));

  const double phi = F + kappa * N / (2.0 * p * s);
  const double ds_phi = -kappa * N / (2.0 * p * s * s) + (b * y * y / ((p - 1.0) * s * s)) * Fp;
  const double dy_phi = -(2.0 * b * y / (s * (p - 1.0))) * Fp;
  const double dyy_phi = -(2.0 * b / (s * (p - 1.0))) * Fp +
                         (4.0 * b * b * y * y * p / (s * s * (p - 1.0) * (p - 1.0))) * Fpp;
  // Radial Laplacian; the (N-1)/y dy_phi term has a finite y -> 0 limit.
  const double lap_phi = dyy_phi - (N - 1) * (2.0 * b / (s * (p - 1.0))) * Fp;

  return -ds_phi + lap_phi - 0.5 * y * dy_phi - phi / (p - 1.0) +
         std::pow(std::abs(phi), p - 1.0) * phi;
}

Field to_similarity(const Field& u, double t, double T, const Grid& y_grid, const Params& pr) {
  if (!(t < T)) throw std::invalid_argument("to_similarity: need t < T");
  const double root = std::sqrt(T - t);
  const double scale = std::pow(T - t, 1.0 / (pr.p - 1.0));
  Field w(y_grid, Frame::similarity, -std::log(T - t));
  for (int i = 0; i < y_grid.n_points; ++i)
    w[i] = scale * u.interp(y_grid.node(i) * root);
  return w;
}

Field from_similarity(const Field& w, double s, double T, const Grid& x_grid, const Params& pr) {
  const double tmt = std::exp(-s);  // T - t
  if (!(tmt > 0.0) || !(tmt <= T))
    throw std::invalid_argument("from_similarity: s maps outside [0, T)");
  const double root = std::sqrt(tmt);
  const double scale = std::pow(tmt, -1.0 / (pr.p - 1.0));
  Field u(x_grid, Frame::physical, T - tmt);
  for (int i = 0; i < x_grid.n_points; ++i)
    u[i] = scale * w.interp(x_grid.node(i) / root);
  return u;
}

}  // namespace blowup
