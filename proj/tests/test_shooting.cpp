#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "blowup/shooting.hpp"

using namespace blowup;

namespace {

ShootConfig cheap_shoot_config() {
  ShootConfig cfg;
  cfg.s0 = 30.0;
  cfg.K = 2.0;
  cfg.A = 20.0;
  cfg.horizon = 42.0;
  cfg.tol = 1e-7;
  cfg.grid = GridSpec(40.0, 801);
  cfg.stepper.ds = 2e-3;
  cfg.stepper.upwind_radius = 2.0 * cfg.K * std::sqrt(cfg.horizon);
  return cfg;
}

MembershipReport synthetic_report(double s, double q0, double q1, const ShrinkingParams& sp) {
  MembershipReport rep;
  rep.s = s;
  rep.q0 = q0;
  rep.q1 = q1;
  rep.margins[0] = sp.bound_q0(s) - std::abs(q0);
  rep.margins[1] = sp.bound_q1(s) - std::abs(q1);
  rep.margins[2] = sp.bound_q2(s);
  rep.margins[3] = sp.bound_minus(s);
  rep.margins[4] = sp.bound_e(s);
  rep.in_set = true;
  for (double m : rep.margins) rep.in_set = rep.in_set && (m > 0.0);
  return rep;
}

}  // namespace

TEST_CASE("shot preparation: shape, support and size") {
  double K = 2.0, A = 20.0, s0 = 30.0;
  Grid g(40.0, 1601);
  ShotParams shot{0.7, -0.3, s0};
  Field psi = prepare_psi(shot, K, A, g);
  double amp = A / (s0 * s0);
  // plateau region: the cutoff is 1 for |y| <= K sqrt(s0)/2
  for (double y : {0.0, 1.0, -3.0, 5.0})
    CHECK(psi.interp(y) == doctest::Approx(amp * (0.7 - 0.3 * y)).epsilon(1e-9));
  // support ends at K sqrt(s0)
  double edge = K * std::sqrt(s0);
  for (int i = 0; i < g.n_points; ++i)
    if (std::abs(g.node(i)) >= edge) CHECK(psi[i] == 0.0);

  CHECK_THROWS(prepare_psi(ShotParams{3.0, 0.0, s0}, K, A, g));   // outside the square
  CHECK_THROWS(prepare_psi(shot, 10.0, A, Grid(40.0, 801)));      // grid too small
}

TEST_CASE("shot preparation: uniform smallness at large s0") {
  Grid g(40.0, 3201);
  double K = 1.0, A = 1.0, s0 = 100.0;
  for (double d0 : {-2.0, 2.0})
    for (double d1 : {-2.0, 2.0}) {
      Field psi = prepare_psi(ShotParams{d0, d1, s0}, K, A, g);
      Field dpsi = gradient(psi);
      CHECK(psi.sup_norm() <= 1.0 / s0);
      CHECK(dpsi.sup_norm() <= 1.0 / s0);
    }
}

TEST_CASE("exit classification on synthetic records") {
  ShrinkingParams sp(2.0, 20.0);
  RunRecord rec;
  rec.shrink = sp;

  // trapped record: no exit
  rec.reports = {synthetic_report(30.0, 0.0, 0.0, sp),
                 synthetic_report(30.05, 1e-4, 0.0, sp)};
  CHECK_FALSE(exit_classify(rec).exited);

  // outgoing q0 exit with positive sign
  rec.reports = {synthetic_report(30.0, 0.5 * sp.bound_q0(30.0), 0.0, sp),
                 synthetic_report(30.05, 1.5 * sp.bound_q0(30.05), 0.0, sp)};
  ExitReport e = exit_classify(rec);
  CHECK(e.exited);
  CHECK(e.components == std::vector<int>{0});
  CHECK_FALSE(e.ambiguous);
  CHECK(e.sign == 1);
  CHECK(e.crossing_outgoing);
  CHECK(e.s_exit == 30.05);

  // negative q1 exit
  rec.reports = {synthetic_report(30.0, 0.0, -0.5 * sp.bound_q1(30.0), sp),
                 synthetic_report(30.05, 0.0, -1.5 * sp.bound_q1(30.05), sp)};
  e = exit_classify(rec);
  CHECK(e.exited);
  CHECK(e.components == std::vector<int>{1});
  CHECK(e.sign == -1);
  CHECK(e.crossing_outgoing);

  // exit at the very first snapshot counts as outgoing
  rec.reports = {synthetic_report(30.0, 2.0 * sp.bound_q0(30.0), 0.0, sp)};
  e = exit_classify(rec);
  CHECK(e.exited);
  CHECK(e.crossing_outgoing);

  // two components at once is flagged ambiguous
  rec.reports = {synthetic_report(30.0, 0.0, 0.0, sp),
                 synthetic_report(30.05, 1.5 * sp.bound_q0(30.05), 1.5 * sp.bound_q1(30.05), sp)};
  e = exit_classify(rec);
  CHECK(e.exited);
  CHECK(e.ambiguous);
  CHECK(e.components.size() == 2);
}

TEST_CASE("bisection traps a trajectory on a short horizon") {
  ShootConfig cfg = cheap_shoot_config();
  ShootResult res = shoot(cfg);
  INFO("failure: ", res.failure);
  REQUIRE(res.success);
  CHECK(res.trapped);
  CHECK(std::abs(res.d0) <= 2.0);
  CHECK(std::abs(res.d1) <= 2.0);
  CHECK(res.achieved_exit_time == cfg.horizon);
  CHECK(res.record.reached_end);
  for (const auto& rep : res.record.reports) CHECK(rep.in_set);

  // every exit seen during the search leaves through an unstable mode,
  // transversally
  CHECK(!res.search_exits.empty());
  for (const auto& ex : res.search_exits) {
    for (int c : ex.components) CHECK(c <= 1);
    CHECK(ex.crossing_outgoing);
  }

  // the midpoint survival time grows as the square shrinks
  REQUIRE(res.progress_rows.size() >= 5);
  auto mid_exit = [](const std::string& row) {
    std::stringstream ss(row);
    std::string tok;
    std::vector<double> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
    REQUIRE(cols.size() == 9);
    return cols[8];
  };
  double early = mid_exit(res.progress_rows.front());
  double late = mid_exit(res.progress_rows.back());
  CHECK(late >= early);
  CHECK(late == cfg.horizon);  // trapped at the final level
  CHECK(early < cfg.horizon);
}
