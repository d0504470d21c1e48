#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "blowup/analysis.hpp"

using namespace blowup;

namespace {

// synthetic space-independent blow-up: u(x,t) = ((p-1)(T-t))^{-1/(p-1)}
TrajectoryStore flat_store(double T, const Params& pr) {
  TrajectoryStore st;
  st.T = T;
  st.params = pr;
  Grid g(0.2, 401);
  const int n = 200;
  for (int k = 0; k <= n; ++k) {
    // geometric in T - t from 1e-2 down to 1e-6
    double tau = 1e-2 * std::pow(1e-4, k / static_cast<double>(n));
    double t = T - tau;
    double val = std::pow((pr.p - 1.0) * tau, -1.0 / (pr.p - 1.0));
    st.t.push_back(t);
    st.u.push_back(Field::sample(g, Frame::physical, t, [val](double) { return val; }));
    st.du.push_back(Field(g, Frame::physical, t));
  }
  return st;
}

}  // namespace

TEST_CASE("intermediate error vanishes on the exact profile") {
  Params pr(3.0, 1);
  Grid g(30.0, 3001);
  double s = 40.0;
  Field w = Field::sample(g, Frame::similarity, s, [&](double y) {
    return profile_phi0(y / std::sqrt(s), pr).value;
  });
  IntermediateError e = intermediate_error(w, s, pr);
  CHECK(e.err_u < 1e-14);
  CHECK(e.err_grad < 1e-3);
}

TEST_CASE("t_of_x0 inverts the frozen-region boundary") {
  double T = 1.0, K = 1.0;
  for (double tau0 : {1e-4, 1e-8, 1e-11}) {
    double x0 = K * std::sqrt(tau0 * std::abs(std::log(tau0)));
    double t = t_of_x0(x0, K, T);
    CHECK(std::abs((T - t) - tau0) / tau0 < 1e-6);
    // sign of x0 is irrelevant
    CHECK(t_of_x0(-x0, K, T) == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK_THROWS(t_of_x0(0.0, K, T));
  CHECK_THROWS(t_of_x0(10.0, K, T));  // beyond the monotone range
}

TEST_CASE("t_of_x0 scales with K") {
  double T = 0.5;
  double tau0 = 1e-6;
  for (double K : {1.0, 4.0}) {
    double x0 = K * std::sqrt(tau0 * std::abs(std::log(tau0)));
    CHECK(std::abs((T - t_of_x0(x0, K, T)) - tau0) / tau0 < 1e-6);
  }
}

TEST_CASE("trajectory store interpolation") {
  Params pr(3.0, 1);
  TrajectoryStore st = flat_store(1.0, pr);
  // sample between snapshots: relative error of the log-linear interpolation
  for (double tau : {3e-3, 1e-4, 2e-6}) {
    double got = st.sample(0.05, 1.0 - tau);
    double want = std::pow(2.0 * tau, -0.5);
    CHECK(got == doctest::Approx(want).epsilon(1e-3));
    CHECK(st.sample_grad(0.05, 1.0 - tau) == 0.0);
  }
  CHECK_THROWS(st.sample(0.0, 1.0 - 1e-8));  // past the last snapshot
}

TEST_CASE("trajectory store from a synthetic run drops post-T snapshots") {
  Params pr(3.0, 1);
  PhysicalRun run;
  run.blew_up = true;
  run.T_est = 1.0;
  Grid g(0.1, 101);
  for (double t : {0.5, 0.9, 0.99, 1.01}) {
    run.t.push_back(t);
    run.snapshots.push_back(
        Field::sample(g, Frame::physical, t, [t](double x) { return t + x; }));
    run.sup_norm.push_back(t + 0.1);
  }
  TrajectoryStore st = TrajectoryStore::from_run(run, pr);
  CHECK(st.t.size() == 3);
  CHECK(st.t_last() == 0.99);
  CHECK(st.sample(0.05, 0.9) == doctest::Approx(0.95).epsilon(1e-12));
  // stored gradient of t + x is 1
  CHECK(st.sample_grad(0.0, 0.9) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rescaled solution of the flat blow-up matches the ode solution") {
  Params pr(3.0, 1);
  TrajectoryStore st = flat_store(1.0, pr);
  double K = 1.0;
  double tau0 = 1e-3;
  double x0 = K * std::sqrt(tau0 * std::abs(std::log(tau0)));
  for (double tau : {0.0, 0.3, 0.7}) {
    auto [U, V] = rescaled_UV(st, x0, 0.5, tau, K);
    double want = std::pow((pr.p - 1.0) * (1.0 - tau), -1.0 / (pr.p - 1.0));
    CHECK(U == doctest::Approx(want).epsilon(2e-3));
    CHECK(V == 0.0);
  }
}

TEST_CASE("closed-form limits") {
  Params pr(3.0, 1);
  double T = 1.0, K = 2.0, x0 = 1e-3;
  auto [U0, V0] = hat_UV(0.0, x0, K, T, pr);
  CHECK(U0 == doctest::Approx(std::pow(pr.p - 1.0 + pr.b() * K * K, -0.5)));
  CHECK(V0 < 0.0);  // x0 > 0 side decreases outward
  auto [Um, Vm] = hat_UV(0.0, -x0, K, T, pr);
  CHECK(Um == doctest::Approx(U0));
  CHECK(Vm == doctest::Approx(-V0));
  // monotone growth toward tau = 1
  double prev = 0.0;
  for (double tau : {0.0, 0.25, 0.5, 0.75, 0.99}) {
    auto [U, V] = hat_UV(tau, x0, K, T, pr);
    CHECK(U > prev);
    prev = U;
  }
}

TEST_CASE("hat functions satisfy the limit odes") {
  for (double p : {2.0, 3.0}) {
    Params pr(p, 1);
    for (double tau : {0.1, 0.5, 0.9})
      for (double K : {1.0, 5.0}) {
        auto [rU, rV] = hat_ode_residual(tau, 1e-3, K, 1.0, pr, 2e-5);
        CHECK(rU < 1e-6);
        CHECK(rV < 1e-6);
      }
  }
}

TEST_CASE("final profile values and derivative consistency") {
  Params pr(3.0, 1);
  // [b x^2 / (2|ln x|)]^{-1/2} at x = 1e-3, b = 1/3
  double want = std::pow(1e-6 / (3.0 * 2.0 * std::abs(std::log(1e-3))), -0.5);
  CHECK(final_profile_u_star(1e-3, pr) == doctest::Approx(want).epsilon(1e-12));
  CHECK(final_profile_u_star(1e-3, pr) == doctest::Approx(6437.9).epsilon(1e-3));
  CHECK(final_profile_u_star(-1e-3, pr) == doctest::Approx(want));

  // derivative points toward the singularity
  CHECK(final_profile_grad_star(1e-3, pr) < 0.0);
  CHECK(final_profile_grad_star(-1e-3, pr) > 0.0);

  // the stated derivative is the leading part of d/dx u*; the ratio to the
  // true finite difference approaches 1 as x -> 0 (log corrections decay)
  auto ratio_at = [&](double x) {
    double e = 1e-3 * x;
    double fd = (final_profile_u_star(x + e, pr) - final_profile_u_star(x - e, pr)) / (2 * e);
    return final_profile_grad_star(x, pr) / fd;
  };
  double r1 = std::abs(ratio_at(1e-3) - 1.0);
  double r2 = std::abs(ratio_at(1e-8) - 1.0);
  CHECK(r2 < r1);
  CHECK(r2 < 0.05);
}

TEST_CASE("profile fit report: ratios, fit constant and trend") {
  ProfileFitReport rep;
  for (int j = 0; j < 10; ++j) {
    rep.grid.push_back(j);
    rep.envelope.push_back(1.0 + j);
    rep.measured.push_back(2.0 * (1.0 + j));
  }
  rep.finalize();
  CHECK(rep.fitted_C == doctest::Approx(2.0));
  CHECK(rep.bounded);
  for (double r : rep.ratio) CHECK(r == doctest::Approx(2.0));

  ProfileFitReport grow;
  for (int j = 0; j < 10; ++j) {
    grow.grid.push_back(j);
    grow.envelope.push_back(1.0);
    grow.measured.push_back(1.0 + j);
  }
  grow.finalize();
  CHECK_FALSE(grow.bounded);
  CHECK(grow.fitted_C == doctest::Approx(10.0));

  std::string csv = grow.to_csv();
  CHECK(csv.find("x_or_s,measured,envelope,ratio") == 0);
}

TEST_CASE("mode residuals vanish on exact mode dynamics") {
  auto make_record = [](bool exact) {
    RunRecord rec;
    const double eps = 1e-6;
    for (double s = 30.0; s <= 31.0 + 1e-9; s += 0.05) {
      MembershipReport rep;
      rep.s = s;
      rep.q0 = exact ? eps * std::exp(s - 30.0) : eps;
      rep.q1 = eps * std::exp(0.5 * (s - 30.0));
      rep.q2 = 0.3 / (s * s);
      rec.reports.push_back(rep);
      rec.snapshot_s.push_back(s);
    }
    return rec;
  };
  ModeResiduals good = mode_residuals(make_record(true), 50.0);
  ModeResiduals bad = mode_residuals(make_record(false), 50.0);
  CHECK(good.c0 < 1e-5);
  CHECK(good.c1 < 1e-5);
  CHECK(good.c2 < 1e-4);
  CHECK(bad.c0 > 100.0 * std::max(good.c0, 1e-12));
}
