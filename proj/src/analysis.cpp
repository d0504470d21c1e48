#include "blowup/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blowup {

IntermediateError intermediate_error(const Field& w, double s, const Params& params) {
  if (!(s > 1.0)) throw std::invalid_argument("intermediate_error: need s > 1");
  IntermediateError e;
  const double rs = std::sqrt(s);
  Field dw = gradient(w);
  for (int i = 0; i < w.size(); ++i) {
    const double y = w.grid.node(i);
    ValueGrad p0 = profile_phi0(y / rs, params);
    e.err_u = std::max(e.err_u, std::abs(w[i] - p0.value));
    e.err_grad = std::max(e.err_grad, std::abs(dw[i] - p0.gradient / rs));
  }
  return e;
}

double t_of_x0(double x0, double K, double T) {
  if (x0 == 0.0) throw std::invalid_argument("t_of_x0: x0 must be nonzero");
  if (!(K > 0.0) || !(T > 0.0)) throw std::invalid_argument("t_of_x0: need K > 0 and T > 0");
  const double target = std::abs(x0);
  // tau = T - t; g(tau) = K sqrt(tau |ln tau|) is increasing on (0, 1/e).
  const double tau_max = std::min(T, std::exp(-1.0)) * (1.0 - 1e-14);
  auto g = [K](double tau) { return K * std::sqrt(tau * std::abs(std::log(tau))); };
  if (target > g(tau_max))
    throw std::invalid_argument("t_of_x0: |x0| too large for a monotone root");
  double lo = 1e-300, hi = tau_max;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);  // bisect in log(tau)
    (g(mid) < target ? lo : hi) = mid;
  }
  return T - 0.5 * (lo + hi);
}

TrajectoryStore TrajectoryStore::from_run(const PhysicalRun& run, const Params& params) {
  if (!run.blew_up || !(run.T_est > 0.0))
    throw std::invalid_argument("TrajectoryStore: run did not blow up");
  TrajectoryStore st;
  st.T = run.T_est;
  st.params = params;
  for (size_t i = 0; i < run.snapshots.size(); ++i) {
    if (!(run.t[i] < st.T)) continue;
    if (!st.t.empty() && run.t[i] <= st.t.back()) continue;
    st.t.push_back(run.t[i]);
    st.u.push_back(run.snapshots[i]);
    st.du.push_back(gradient(run.snapshots[i]));
  }
  if (st.t.size() < 2) throw std::invalid_argument("TrajectoryStore: too few snapshots");
  return st;
}

namespace {

double store_sample(const TrajectoryStore& st, const std::vector<Field>& fields, double x,
                    double at_t) {
  if (at_t < st.t.front() - 1e-15 || at_t > st.t.back() + 1e-15)
    throw std::out_of_range("TrajectoryStore: time outside stored snapshots");
  at_t = std::clamp(at_t, st.t.front(), st.t.back());
  auto it = std::upper_bound(st.t.begin(), st.t.end(), at_t);
  size_t j = std::min(static_cast<size_t>(it - st.t.begin()), st.t.size() - 1);
  size_t i = j - 1;
  // Linear in ln(T - t): snapshots are geometrically spaced in T - t.
  const double li = std::log(st.T - st.t[i]);
  const double lj = std::log(st.T - st.t[j]);
  const double l = std::log(st.T - at_t);
  const double a = (lj == li) ? 0.0 : (l - li) / (lj - li);
  return (1.0 - a) * fields[i].interp(x) + a * fields[j].interp(x);
}

}  // namespace

double TrajectoryStore::sample(double x, double at_t) const {
  return store_sample(*this, u, x, at_t);
}

double TrajectoryStore::sample_grad(double x, double at_t) const {
  return store_sample(*this, du, x, at_t);
}

std::pair<double, double> rescaled_UV(const TrajectoryStore& store, double x0, double xi,
                                      double tau, double K) {
  if (!(tau >= 0.0) || !(tau < 1.0)) throw std::invalid_argument("rescaled_UV: tau in [0,1)");
  const double t0 = t_of_x0(x0, K, store.T);
  const double rem = store.T - t0;
  const double scale = std::pow(rem, 1.0 / (store.params.p - 1.0));
  const double x = x0 + xi * std::sqrt(rem);
  const double tt = t0 + tau * rem;
  const double U = scale * store.sample(x, tt);
  const double V = scale * std::sqrt(rem) * store.sample_grad(x, tt);
  return {U, V};
}

std::pair<double, double> hat_UV(double tau, double x0, double K, double T,
                                 const Params& params) {
  if (!(tau >= 0.0) || !(tau < 1.0)) throw std::invalid_argument("hat_UV: tau in [0,1)");
  const double p = params.p, b = params.b();
  const double t0 = t_of_x0(x0, K, T);
  const double core = (p - 1.0) * (1.0 - tau) + b * K * K;
  const double U = std::pow(core, -1.0 / (p - 1.0));
  const double lg = std::abs(std::log(T - t0));
  const double V = -(x0 > 0 ? 1.0 : -1.0) * (2.0 * b * K / ((p - 1.0) * std::sqrt(lg))) *
                   std::pow(core, -p / (p - 1.0));
  return {U, V};
}

std::pair<double, double> hat_ode_residual(double tau, double x0, double K, double T,
                                           const Params& params, double fd_step) {
  const double p = params.p;
  auto lo = hat_UV(tau - fd_step, x0, K, T, params);
  auto mi = hat_UV(tau, x0, K, T, params);
  auto hi = hat_UV(tau + fd_step, x0, K, T, params);
  const double dU = (hi.first - lo.first) / (2.0 * fd_step);
  const double dV = (hi.second - lo.second) / (2.0 * fd_step);
  const double rU = std::abs(dU - std::pow(mi.first, p));
  const double rV = std::abs(dV - p * std::pow(mi.first, p - 1.0) * mi.second);
  return {rU, rV};
}

double final_profile_u_star(double x, const Params& params) {
  if (x == 0.0 || std::abs(x) >= 1.0)
    throw std::invalid_argument("final_profile_u_star: need 0 < |x| < 1");
  const double p = params.p, b = params.b();
  const double L = std::abs(std::log(std::abs(x)));
  return std::pow(b * x * x / (2.0 * L), -1.0 / (p - 1.0));
}

double final_profile_grad_star(double x, const Params& params) {
  if (x == 0.0 || std::abs(x) >= 1.0)
    throw std::invalid_argument("final_profile_grad_star: need 0 < |x| < 1");
  const double p = params.p, b = params.b();
  const double L = std::abs(std::log(std::abs(x)));
  return -(std::sqrt(2.0 * b) / (p - 1.0)) * (x > 0 ? 1.0 : -1.0) / std::sqrt(L) *
         std::pow(b * x * x / (2.0 * L), -(p + 1.0) / (2.0 * (p - 1.0)));
}

void ProfileFitReport::finalize() {
  const size_t n = grid.size();
  if (measured.size() != n || envelope.size() != n || n == 0)
    throw std::invalid_argument("ProfileFitReport: inconsistent columns");
  ratio.resize(n);
  fitted_C = 0.0;
  double first_half = 0.0, last_half = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ratio[i] = measured[i] / envelope[i];
    const double r = std::abs(ratio[i]);
    fitted_C = std::max(fitted_C, r);
    if (i < n / 2)
      first_half = std::max(first_half, r);
    else
      last_half = std::max(last_half, r);
  }
  bounded = last_half <= first_half * 1.2;
}

const char* ProfileFitReport::csv_header() { return "x_or_s,measured,envelope,ratio"; }

std::string ProfileFitReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << csv_header() << '\n';
  for (size_t i = 0; i < grid.size(); ++i)
    os << grid[i] << ',' << measured[i] << ',' << envelope[i] << ',' << ratio[i] << '\n';
  return os.str();
}

std::pair<ProfileFitReport, ProfileFitReport> intermediate_fit(const RunRecord& record,
                                                               const Params& params) {
  if (record.snapshots.empty())
    throw std::invalid_argument("intermediate_fit: record has no stored fields");
  ProfileFitReport ru, rg;
  for (size_t k = 0; k < record.snapshots.size(); ++k) {
    const double s = record.snapshot_s[k];
    Field w = record.snapshots[k];
    for (int i = 0; i < w.size(); ++i) w[i] += profile_phi(w.grid.node(i), s, params);
    IntermediateError e = intermediate_error(w, s, params);
    const double env = std::log(s) / s;
    ru.grid.push_back(s);
    ru.measured.push_back(e.err_u);
    ru.envelope.push_back(env);
    rg.grid.push_back(s);
    rg.measured.push_back(e.err_grad);
    rg.envelope.push_back(env);
  }
  ru.finalize();
  rg.finalize();
  return {ru, rg};
}

std::pair<ProfileFitReport, ProfileFitReport> final_profile_fit(
    const TrajectoryStore& store, const Params& params, const std::vector<double>& x_range) {
  ProfileFitReport ru, rg;
  const Field& last = store.u.back();
  const Field& dlast = store.du.back();
  for (double x0 : x_range) {
    ru.grid.push_back(x0);
    ru.measured.push_back(last.interp(x0));
    ru.envelope.push_back(final_profile_u_star(x0, params));
    rg.grid.push_back(x0);
    rg.measured.push_back(dlast.interp(x0));
    rg.envelope.push_back(final_profile_grad_star(x0, params));
  }
  ru.finalize();
  rg.finalize();
  return {ru, rg};
}

ModeResiduals mode_residuals(const RunRecord& record, double A, double s_max) {
  const auto& rep = record.reports;
  ModeResiduals mr;
  if (rep.size() < 3) return mr;
  for (size_t k = 1; k + 1 < rep.size(); ++k) {
    if (rep[k + 1].s > s_max) break;
    const double ds = rep[k + 1].s - rep[k - 1].s;
    const double s = rep[k].s;
    const double d0 = (rep[k + 1].q0 - rep[k - 1].q0) / ds;
    const double d1 = (rep[k + 1].q1 - rep[k - 1].q1) / ds;
    const double d2 = (rep[k + 1].q2 - rep[k - 1].q2) / ds;
    mr.c0 = std::max(mr.c0, std::abs(d0 - rep[k].q0) * s * s);
    mr.c1 = std::max(mr.c1, std::abs(d1 - 0.5 * rep[k].q1) * s * s);
    mr.c2 = std::max(mr.c2, std::abs(d2 + 2.0 * rep[k].q2 / s) * s * s * s / A);
  }
  return mr;
}

}  // namespace blowup
