#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "blowup/solver.hpp"

namespace blowup {

/// Sup-norm distances of a similarity-frame solution w(.,s) from the
/// self-similar profile: err_u = ||w - phi0(y/sqrt(s))||_inf and
/// err_grad = ||grad w - grad phi0(y/sqrt(s))/sqrt(s)||_inf.
struct IntermediateError {
  double err_u = 0.0;
  double err_grad = 0.0;
};
IntermediateError intermediate_error(const Field& w, double s, const Params& params);

/// The root t of |x0| = K sqrt((T-t)|ln(T-t)|), by bisection to relative
/// tolerance 1e-12. Requires |x0| small enough that the right side is
/// monotone over the bracketing range.
double t_of_x0(double x0, double K, double T);

/// Space-time store of a physical-frame run; interpolates linearly in x and
/// in ln(T-t) (snapshots are geometrically spaced in T-t).
struct TrajectoryStore {
  double T = 0.0;
  Params params;
  std::vector<double> t;
  std::vector<Field> u;
  std::vector<Field> du;

  TrajectoryStore() : params(3.0, 1) {}

  /// Builds the store from a blow-up run, using its T estimate and keeping
  /// only snapshots strictly before T.
  static TrajectoryStore from_run(const PhysicalRun& run, const Params& params);

  double t_min() const { return t.front(); }
  double t_last() const { return t.back(); }
  double sample(double x, double at_t) const;
  double sample_grad(double x, double at_t) const;
};

/// The rescaled solution around x0:
///   U(x0,xi,tau) = (T-t0)^{1/(p-1)} u(x0 + xi sqrt(T-t0), t0 + tau (T-t0)),
///   V = d/dxi U, with t0 = t_of_x0(x0, K, T).
std::pair<double, double> rescaled_UV(const TrajectoryStore& store, double x0, double xi,
                                      double tau, double K);

/// Closed-form limits of U and V as t0 -> T:
///   U_hat(tau) = ((p-1)(1-tau) + b K^2)^{-1/(p-1)},
///   V_hat(tau) = -sign(x0) (2bK/((p-1) sqrt(|ln(T-t0)|)))
///                ((p-1)(1-tau) + b K^2)^{-p/(p-1)}.
std::pair<double, double> hat_UV(double tau, double x0, double K, double T,
                                 const Params& params);

/// Residuals of the limit system U' = U^p, V' = p U^{p-1} V under centered
/// finite differencing of the closed forms.
std::pair<double, double> hat_ode_residual(double tau, double x0, double K, double T,
                                           const Params& params, double fd_step = 1e-4);

/// Final profile u*(x) = [b x^2 / (2|ln|x||)]^{-1/(p-1)} and its leading
/// derivative in x (the |ln|x|| variation is subleading).
double final_profile_u_star(double x, const Params& params);
double final_profile_grad_star(double x, const Params& params);

/// Measured error against an analytic envelope over a sample grid. The
/// fitted constant is max(measured/envelope); the trend verdict is
/// "bounded" when the fit over the last half of the range does not exceed
/// the first half by more than 20%.
struct ProfileFitReport {
  std::vector<double> grid;  // s values or x values
  std::vector<double> measured;
  std::vector<double> envelope;
  std::vector<double> ratio;  // measured / envelope
  double fitted_C = 0.0;
  bool bounded = false;

  void finalize();  // fills ratio, fitted_C, bounded from grid/measured/envelope
  static const char* csv_header();
  std::string to_csv() const;
};

/// Intermediate-profile reports (u and gradient) along a similarity run with
/// stored snapshots; envelope ln s / s.
std::pair<ProfileFitReport, ProfileFitReport> intermediate_fit(const RunRecord& record,
                                                               const Params& params);

/// Final-profile reports at t_last for each x0 in x_range: measured
/// u(x0,t_last) (resp. gradient) against the envelope u* (resp. grad u*),
/// so ratio = u/u*.
std::pair<ProfileFitReport, ProfileFitReport> final_profile_fit(
    const TrajectoryStore& store, const Params& params, const std::vector<double>& x_range);

/// Fitted constants of the mode dynamics along a trapped trajectory:
///   c0 = max |q0' - q0| s^2, c1 = max |q1' - q1/2| s^2,
///   c2 = max |q2' + 2 q2/s| s^3 / A,
/// with derivatives by centered differences over snapshots.
struct ModeResiduals {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};
/// Snapshots with s > s_max are ignored; useful near criticality, where the
/// amplified unstable mode makes the late-s residuals step-size sensitive.
ModeResiduals mode_residuals(const RunRecord& record, double A,
                             double s_max = std::numeric_limits<double>::infinity());

}  // namespace blowup
