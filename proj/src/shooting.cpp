#include "blowup/shooting.hpp"

#include <cmath>
#include <future>
#include <sstream>

namespace blowup {

ShootConfig::ShootConfig() {
  // Centered drift differences are only stable where |y| ds / (2h) stays
  // small against the implicit diffusion; switch to upwinding outside the
  // region the bounded components live in.
  stepper.upwind_radius = 2.0 * K * std::sqrt(horizon);
}

Field prepare_psi(const ShotParams& shot, double K, double A, const Grid& grid) {
  shot.validate();
  if (!(2.0 * K * std::sqrt(shot.s0) < grid.y_max))
    throw std::invalid_argument("prepare_psi: grid too small, need 2K sqrt(s0) < y_max");
  const double amp = A / (shot.s0 * shot.s0);
  return Field::sample(grid, Frame::similarity, shot.s0, [&](double y) {
    return amp * (shot.d0 + shot.d1 * y) * cutoff_chi0(2.0 * std::abs(y) / (K * std::sqrt(shot.s0)));
  });
}

ExitReport exit_classify(const RunRecord& record) {
  ExitReport rep;
  size_t k = 0;
  for (; k < record.reports.size(); ++k)
    if (!record.reports[k].in_set) break;
  if (k == record.reports.size()) return rep;  // trapped, no exit

  const MembershipReport& at = record.reports[k];
  rep.exited = true;
  rep.s_exit = at.s;
  for (int c = 0; c < 5; ++c)
    if (at.margins[c] < 0.0) rep.components.push_back(c);
  rep.ambiguous = rep.components.size() > 1;

  const int lead = rep.components.front();
  if (lead <= 1) {
    const double val = (lead == 0) ? at.q0 : at.q1;
    rep.sign = (val > 0.0) ? 1 : -1;
    if (k == 0) {
      rep.crossing_outgoing = true;  // started outside, nothing to cross
    } else {
      const MembershipReport& prev = record.reports[k - 1];
      const double pv = (lead == 0) ? prev.q0 : prev.q1;
      // d/ds (sigma q_i - A/s^2) > 0 means the mode leaves through the
      // boundary instead of grazing it. q0 and q1 share the bound A/s^2.
      const double ds = at.s - prev.s;
      const double g_now = rep.sign * val - record.shrink.bound_q0(at.s);
      const double g_prev = rep.sign * pv - record.shrink.bound_q0(prev.s);
      rep.crossing_outgoing = (g_now - g_prev) / ds > 0.0;
    }
  }
  return rep;
}

namespace {

struct Probe {
  bool trapped = false;
  double exit_time = 0.0;
  ExitReport exit;
  RunRecord record;
};

Probe probe_run(const ShootConfig& cfg, double d0, double d1, bool store_fields) {
  ShotParams shot{d0, d1, cfg.s0};
  Field psi = prepare_psi(shot, cfg.K, cfg.A, cfg.grid.grid());
  ShrinkingParams shrink(cfg.K, cfg.A);
  Probe pr;
  pr.record = run_similarity(psi, cfg.s0, cfg.horizon, cfg.stepper, cfg.params, shrink,
                             store_fields);
  if (pr.record.diverged) {
    pr.exit_time = pr.record.s_diverged;
    return pr;
  }
  pr.exit = exit_classify(pr.record);
  pr.trapped = !pr.exit.exited && pr.record.reached_end;
  pr.exit_time = pr.trapped ? cfg.horizon : pr.exit.s_exit;
  return pr;
}

}  // namespace

const char* ShootResult::progress_header() {
  return "level,center_d0,center_d1,radius,exit_ll,exit_lh,exit_hl,exit_hh,exit_mid";
}

ShootResult shoot(const ShootConfig& cfg) {
  if (!(cfg.horizon > cfg.s0)) throw std::invalid_argument("shoot: horizon must exceed s0");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("shoot: tol must be positive");

  ShootResult res;
  double lo0 = -2.0, hi0 = 2.0, lo1 = -2.0, hi1 = 2.0;
  bool touched0 = false, touched1 = false;

  const int max_levels = 64;
  for (int level = 0; level < max_levels; ++level) {
    // Four corner trajectories of the current square, run concurrently.
    const double c0[4] = {lo0, lo0, hi0, hi0};
    const double c1[4] = {lo1, hi1, lo1, hi1};
    std::future<Probe> fut[4];
    for (int i = 0; i < 4; ++i)
      fut[i] = std::async(std::launch::async, probe_run, std::cref(cfg), c0[i], c1[i], false);
    Probe corner[4];
    for (int i = 0; i < 4; ++i) {
      corner[i] = fut[i].get();
      if (corner[i].exit.exited) res.search_exits.push_back(corner[i].exit);
    }

    const double m0 = 0.5 * (lo0 + hi0), m1 = 0.5 * (lo1 + hi1);
    const double radius = 0.5 * std::max(hi0 - lo0, hi1 - lo1);
    std::ostringstream row;
    row.precision(17);
    row << level << ',' << m0 << ',' << m1 << ',' << radius;
    for (int i = 0; i < 4; ++i) row << ',' << corner[i].exit_time;

    // Degree check: a bracketing square must not have all four corners
    // leaving through the same signed boundary.
    bool all_same = true;
    for (int i = 1; i < 4; ++i) {
      if (corner[i].trapped || corner[0].trapped ||
          corner[i].exit.components != corner[0].exit.components ||
          corner[i].exit.sign != corner[0].exit.sign)
        all_same = false;
    }
    if (all_same && corner[0].exit.exited) {
      row << ",0";
      res.progress_rows.push_back(row.str());
      res.failure = "degree check failed: all four corners exit in the same direction";
      res.d0 = m0;
      res.d1 = m1;
      return res;
    }

    Probe mid = probe_run(cfg, m0, m1, true);
    row << ',' << mid.exit_time;
    res.progress_rows.push_back(row.str());
    if (mid.exit.exited) res.search_exits.push_back(mid.exit);
    res.d0 = m0;
    res.d1 = m1;
    res.achieved_exit_time = mid.exit_time;
    res.record = std::move(mid.record);
    if (mid.trapped) {
      res.success = true;
      res.trapped = true;
      return res;
    }
    if (mid.record.diverged) {
      res.failure = "trajectory diverged during bisection";
      return res;
    }

    bool updated = false;
    for (int c : mid.exit.components) {
      if (c == 0) {
        touched0 = true;
        if (mid.exit.sign > 0) hi0 = m0; else lo0 = m0;
        updated = true;
      } else if (c == 1) {
        touched1 = true;
        if (mid.exit.sign > 0) hi1 = m1; else lo1 = m1;
        updated = true;
      }
    }
    if (!updated) {
      res.failure = "exit through a non-unstable component: " +
                    std::string(kComponentNames[mid.exit.components.front()]);
      return res;
    }
    const bool done0 = !touched0 || (hi0 - lo0) < cfg.tol;
    const bool done1 = !touched1 || (hi1 - lo1) < cfg.tol;
    if (done0 && done1 && (touched0 || touched1)) {
      res.failure = "square shrunk below tol without trapping";
      return res;
    }
  }
  res.failure = "bisection level limit reached";
  return res;
}

}  // namespace blowup
