#include "blowup/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blowup {

namespace {

/// Thomas algorithm for a constant-coefficient tridiagonal system
/// diag*x_i + off*(x_{i-1} + x_{i+1}) = rhs_i on the interior, with the
/// boundary values of x prescribed.
void solve_tridiag_interior(std::vector<double>& x, const std::vector<double>& rhs,
                            double diag, double off, double left_bc, double right_bc) {
  const int n = static_cast<int>(x.size());
  static thread_local std::vector<double> cp, dp;
  cp.assign(n, 0.0);
  dp.assign(n, 0.0);

  x[0] = left_bc;
  x[n - 1] = right_bc;
  // Forward sweep over interior rows 1..n-2.
  double denom = diag;
  cp[1] = off / denom;
  dp[1] = (rhs[1] - off * left_bc) / denom;
  for (int i = 2; i <= n - 3; ++i) {
    denom = diag - off * cp[i - 1];
    cp[i] = off / denom;
    dp[i] = (rhs[i] - off * dp[i - 1]) / denom;
  }
  denom = diag - off * cp[n - 3];
  dp[n - 2] = (rhs[n - 2] - off * right_bc - off * dp[n - 3]) / denom;

  x[n - 2] = dp[n - 2];
  for (int i = n - 3; i >= 1; --i) x[i] = dp[i] - cp[i] * x[i + 1];
}

struct Coeffs {
  double s = -1.0;
  std::vector<double> phi, phi_pm1, V, R;
};

void fill_coeffs(Coeffs& c, const Grid& g, double s, const Params& pr) {
  if (c.s == s && static_cast<int>(c.phi.size()) == g.n_points) return;
  const int n = g.n_points;
  c.phi.resize(n);
  c.phi_pm1.resize(n);
  c.V.resize(n);
  c.R.resize(n);
  const double p = pr.p, b = pr.b(), kappa = pr.kappa();
  const int N = pr.N;
  const bool cubic = (p == 3.0);
  const double tail = kappa * N / (2.0 * p * s);
  for (int i = 0; i < n; ++i) {
    const double y = g.node(i);
    const double gy = p - 1.0 + b * y * y / s;
    const double F = cubic ? 1.0 / std::sqrt(gy) : std::pow(gy, -1.0 / (p - 1.0));
    const double Fp = F / gy;
    const double Fpp = Fp / gy;
    const double phi = F + tail;
    const double phi_pm1 = cubic ? phi * phi : std::pow(phi, p - 1.0);
    const double ds_phi =
        -kappa * N / (2.0 * p * s * s) + (b * y * y / ((p - 1.0) * s * s)) * Fp;
    const double dy_phi = -(2.0 * b * y / (s * (p - 1.0))) * Fp;
    const double lap_phi = -(2.0 * b / (s * (p - 1.0))) * Fp * N +
                           (4.0 * b * b * y * y * p / (s * s * (p - 1.0) * (p - 1.0))) * Fpp;
    c.phi[i] = phi;
    c.phi_pm1[i] = phi_pm1;
    c.V[i] = p * (phi_pm1 - 1.0 / (p - 1.0));
    c.R[i] = -ds_phi + lap_phi - 0.5 * y * dy_phi - phi / (p - 1.0) + phi_pm1 * phi;
  }
  c.s = s;
}

double eval_B(double q, double phi, double phi_pm1, double p) {
  const double u = q + phi;
  if (p == 3.0) return u * u * u - phi_pm1 * phi - 3.0 * phi_pm1 * q;
  return std::pow(std::abs(u), p - 1.0) * u - phi_pm1 * phi - p * phi_pm1 * q;
}

/// Explicit part of the q-equation: drift, unit term, V q, B(q), R.
void explicit_rhs(std::vector<double>& out, const Field& q, const Coeffs& c,
                  const StepperConfig& cfg, const Params& pr, const TermToggles& tg) {
  const Grid& g = q.grid;
  const int n = g.n_points;
  const double h = g.spacing();
  out.resize(n);
  out[0] = out[n - 1] = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    const double y = g.node(i);
    const double drift_speed = -0.5 * y;
    double dq;
    if (std::abs(y) <= cfg.upwind_radius) {
      dq = (q[i + 1] - q[i - 1]) / (2.0 * h);
    } else if (y > 0.0) {
      // transport velocity is +y/2 (outward): upwind is one-sided inward
      dq = (q[i] - q[i - 1]) / h;
    } else {
      dq = (q[i + 1] - q[i]) / h;
    }
    double e = drift_speed * dq + q[i];
    if (tg.potential) e += c.V[i] * q[i];
    if (tg.nonlinear) e += eval_B(q[i], c.phi[i], c.phi_pm1[i], pr.p);
    if (tg.remainder) e += c.R[i];
    out[i] = e;
  }
}

Field euler_step_q(const Field& q, double s, const StepperConfig& cfg, const Params& pr,
                   const TermToggles& tg, Coeffs& coeffs) {
  const Grid& g = q.grid;
  const double h = g.spacing();
  const double nu = cfg.ds / (h * h);
  fill_coeffs(coeffs, g, s, pr);

  static thread_local std::vector<double> rhs;
  explicit_rhs(rhs, q, coeffs, cfg, pr, tg);
  for (int i = 1; i < g.n_points - 1; ++i) rhs[i] = q[i] + cfg.ds * rhs[i];

  Field out(g, q.frame, s + cfg.ds);
  double bl = 0.0, br = 0.0;
  if (cfg.boundary == Boundary::extrapolation) {
    bl = 2.0 * q[1] - q[2];
    br = 2.0 * q[g.n_points - 2] - q[g.n_points - 3];
  }
  solve_tridiag_interior(out.values, rhs, 1.0 + 2.0 * nu, -nu, bl, br);
  return out;
}

}  // namespace

Field gradient(const Field& f) {
  const int n = f.size();
  if (n < 3) throw std::invalid_argument("gradient: need at least 3 points");
  const double h = f.grid.spacing();
  Field out(f.grid, f.frame, f.time);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return out;
}

Field step_q(const Field& q, double s, const StepperConfig& cfg, const Params& params,
             const TermToggles& toggles) {
  cfg.validate(q.grid.spacing());
  Coeffs coeffs;
  return euler_step_q(q, s, cfg, params, toggles, coeffs);
}

Field step_w(const Field& w, double s, const StepperConfig& cfg, const Params& params) {
  cfg.validate(w.grid.spacing());
  const Grid& g = w.grid;
  const double h = g.spacing();
  const double nu = cfg.ds / (h * h);
  const double p = params.p;

  std::vector<double> rhs(g.n_points, 0.0);
  for (int i = 1; i < g.n_points - 1; ++i) {
    const double y = g.node(i);
    double dw;
    if (std::abs(y) <= cfg.upwind_radius) {
      dw = (w[i + 1] - w[i - 1]) / (2.0 * h);
    } else if (y > 0.0) {
      dw = (w[i] - w[i - 1]) / h;
    } else {
      dw = (w[i + 1] - w[i]) / h;
    }
    const double e = -0.5 * y * dw - w[i] / (p - 1.0) + std::pow(std::abs(w[i]), p - 1.0) * w[i];
    rhs[i] = w[i] + cfg.ds * e;
  }

  Field out(g, w.frame, s + cfg.ds);
  double bl, br;
  if (cfg.boundary == Boundary::extrapolation) {
    bl = 2.0 * w[1] - w[2];
    br = 2.0 * w[g.n_points - 2] - w[g.n_points - 3];
  } else {
    bl = profile_phi(g.node(0), s + cfg.ds, params);
    br = profile_phi(g.node(g.n_points - 1), s + cfg.ds, params);
  }
  solve_tridiag_interior(out.values, rhs, 1.0 + 2.0 * nu, -nu, bl, br);
  return out;
}

RunRecord run_similarity(const Field& q0, double s0, double s_end, const StepperConfig& cfg,
                         const Params& params, const ShrinkingParams& shrink,
                         bool store_fields) {
  if (!(s_end > s0) || !(s0 > 1.0))
    throw std::invalid_argument("run_similarity: need s_end > s0 > 1");
  cfg.validate(q0.grid.spacing());

  RunRecord rec;
  rec.s0 = s0;
  rec.s_end = s_end;
  rec.shrink = shrink;

  const int steps_per_snap = std::max(1, static_cast<int>(std::lround(cfg.snapshot_interval / cfg.ds)));
  const Grid& g = q0.grid;
  const double h = g.spacing();
  const double nu = cfg.ds / (h * h);

  auto record_snapshot = [&](const Field& q, double s) -> bool {
    ModeDecomposition dec = decompose(q, s, shrink.K);
    MembershipReport rep = shrinking_check(dec, s, shrink);
    rec.reports.push_back(rep);
    rec.snapshot_s.push_back(s);
    if (store_fields) rec.snapshots.push_back(q);
    if (!rep.in_set) {
      rec.exited = true;
      rec.exit.s_exit = s;
      for (int c = 0; c < 5; ++c)
        if (rep.margins[c] < 0.0) rec.exit.components.push_back(c);
      return false;
    }
    return true;
  };

  Field q = q0;
  q.time = s0;
  if (!record_snapshot(q, s0)) return rec;

  Coeffs coeffs;
  const bool bdf2 = (cfg.scheme == Scheme::imex_bdf2);
  Field q_prev;
  std::vector<double> e_prev, e_cur, rhs;

  long step = 0;
  const long total_steps = static_cast<long>(std::ceil((s_end - s0) / cfg.ds - 1e-9));
  while (step < total_steps) {
    const double s = s0 + step * cfg.ds;
    fill_coeffs(coeffs, g, s, params);
    Field q_next;
    if (!bdf2 || step == 0) {
      q_next = euler_step_q(q, s, cfg, params, TermToggles{}, coeffs);
    } else {
      explicit_rhs(e_cur, q, coeffs, cfg, params, TermToggles{});
      rhs.resize(g.n_points);
      for (int i = 1; i < g.n_points - 1; ++i)
        rhs[i] = 2.0 * q[i] - 0.5 * q_prev[i] + cfg.ds * (2.0 * e_cur[i] - e_prev[i]);
      q_next = Field(g, q.frame, s + cfg.ds);
      double bl = 0.0, br = 0.0;
      if (cfg.boundary == Boundary::extrapolation) {
        bl = 2.0 * q[1] - q[2];
        br = 2.0 * q[g.n_points - 2] - q[g.n_points - 3];
      }
      solve_tridiag_interior(q_next.values, rhs, 1.5 + 2.0 * nu, -nu, bl, br);
      e_prev.swap(e_cur);
    }
    if (bdf2 && step == 0) {
      explicit_rhs(e_prev, q, coeffs, cfg, params, TermToggles{});
    }
    q_prev = std::move(q);
    q = std::move(q_next);
    ++step;
    const double s_new = s0 + step * cfg.ds;

    const double sup = q.sup_norm();
    if (!std::isfinite(sup) || sup > 10.0 * shrink.envelope(s_new)) {
      rec.diverged = true;
      rec.s_diverged = s_new;
      return rec;
    }
    if (step % steps_per_snap == 0 || step == total_steps) {
      if (!record_snapshot(q, s_new)) return rec;
    }
  }
  rec.reached_end = true;
  return rec;
}

PhysicalRun run_physical(const Field& u0, const PhysicalConfig& cfg, const Params& params) {
  const Grid& g = u0.grid;
  const double h = g.spacing();
  const double p = params.p;

  PhysicalRun run;
  double sup0 = u0.sup_norm();
  if (sup0 == 0.0) {
    run.blew_up = false;
    run.verdict = "non-blow-up";
    run.t.push_back(0.0);
    run.snapshots.push_back(u0);
    run.sup_norm.push_back(0.0);
    return run;
  }

  const double v0 = std::pow(sup0, 1.0 - p);
  double v_snap = v0;
  double t = 0.0;
  Field u = u0;
  u.frame = Frame::physical;

  auto snapshot = [&]() {
    run.t.push_back(t);
    Field s = u;
    s.time = t;
    run.snapshots.push_back(std::move(s));
    run.sup_norm.push_back(u.sup_norm());
  };
  snapshot();

  auto react_exact = [&](double tau) {
    // d_t u = |u|^{p-1} u solved exactly node-wise.
    for (double& x : u.values) {
      if (x == 0.0) continue;
      const double a = std::abs(x);
      const double bracket = std::pow(a, 1.0 - p) - (p - 1.0) * tau;
      if (bracket <= 0.0)
        throw std::runtime_error("run_physical: node blow-up within a step (dt too large)");
      x = (x > 0.0 ? 1.0 : -1.0) * std::pow(bracket, -1.0 / (p - 1.0));
    }
  };

  std::vector<double> rhs(g.n_points);
  std::vector<double> cp(g.n_points), dp(g.n_points);
  auto diffuse = [&](double dt) {
    // Backward Euler with mirror (Neumann) boundaries.
    const double nu = dt / (h * h);
    const int n = g.n_points;
    const double diag = 1.0 + 2.0 * nu, off = -nu;
    // Row 0: diag*u0 + 2*off*u1 ; row n-1 symmetric.
    cp[0] = 2.0 * off / diag;
    dp[0] = u[0] / diag;
    for (int i = 1; i < n - 1; ++i) {
      double denom = diag - off * cp[i - 1];
      cp[i] = off / denom;
      dp[i] = (u[i] - off * dp[i - 1]) / denom;
    }
    double denom = diag - 2.0 * off * cp[n - 2];
    dp[n - 1] = (u[n - 1] - 2.0 * off * dp[n - 2]) / denom;
    u[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = dp[i] - cp[i] * u[i + 1];
  };

  double prev_sup = sup0;
  int decay_count = 0;
  for (long step = 0; step < cfg.max_steps; ++step) {
    const double sup = u.sup_norm();
    const double v = std::pow(sup, 1.0 - p);
    if (v <= cfg.stop_ratio * v0) {
      run.blew_up = true;
      break;
    }
    const double dt = cfg.dt_factor * std::min(v, 100.0 * v0);
    react_exact(0.5 * dt);
    diffuse(dt);
    react_exact(0.5 * dt);
    t += dt;

    const double sup_new = u.sup_norm();
    if (!std::isfinite(sup_new))
      throw std::runtime_error("run_physical: solution lost finiteness");
    decay_count = (sup_new < prev_sup) ? decay_count + 1 : 0;
    prev_sup = sup_new;
    if (decay_count >= cfg.decay_window) break;

    const double v_new = std::pow(sup_new, 1.0 - p);
    if (v_new <= cfg.snapshot_ratio * v_snap) {
      snapshot();
      v_snap = v_new;
    }
  }
  snapshot();

  if (run.blew_up) {
    run.verdict = "blow-up";
    // Linear extrapolation of ||u||^{1-p} -> 0 over the last snapshots.
    const int n = static_cast<int>(run.t.size());
    const int w = std::min(cfg.t_est_window, n);
    double st = 0, sv = 0, stt = 0, stv = 0;
    for (int i = n - w; i < n; ++i) {
      const double ti = run.t[i];
      const double vi = std::pow(run.sup_norm[i], 1.0 - p);
      st += ti;
      sv += vi;
      stt += ti * ti;
      stv += ti * vi;
    }
    const double slope = (w * stv - st * sv) / (w * stt - st * st);
    const double icept = (sv - slope * st) / w;
    if (slope < 0.0) run.T_est = -icept / slope;
  } else {
    run.verdict = "non-blow-up";
  }
  return run;
}

}  // namespace blowup
