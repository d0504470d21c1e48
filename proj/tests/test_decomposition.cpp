#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "blowup/decomposition.hpp"
#include "blowup/spectral.hpp"

using namespace blowup;

TEST_CASE("cutoff profile") {
  CHECK(cutoff_chi0(0.0) == 1.0);
  CHECK(cutoff_chi0(1.0) == 1.0);
  CHECK(cutoff_chi0(2.0) == 0.0);
  CHECK(cutoff_chi0(3.0) == 0.0);
  CHECK(cutoff_chi0(1.5) == doctest::Approx(0.5));
  // monotone on the transition
  double prev = 1.0;
  for (double xi = 1.0; xi <= 2.0; xi += 0.01) {
    double v = cutoff_chi0(xi);
    CHECK(v <= prev + 1e-14);
    prev = v;
  }
  // C^1 at the junctions: one-sided slopes vanish
  double e = 1e-5;
  CHECK(std::abs(cutoff_chi0(1.0 + e) - cutoff_chi0(1.0)) / e < 1e-3);
  CHECK(std::abs(cutoff_chi0(2.0) - cutoff_chi0(2.0 - e)) / e < 1e-3);
  CHECK(cutoff_chi(3.0, 25.0, 1.0) == doctest::Approx(cutoff_chi0(3.0 / 5.0)));
}

TEST_CASE("projection picks out hermite coefficients") {
  Grid g(40.0, 8001);
  for (int beta = 0; beta <= 4; ++beta) {
    Field hb = Field::sample(g, Frame::similarity, 0.0,
                             [beta](double y) { return hermite_poly(beta, y); });
    for (int other = 0; other <= 4; ++other) {
      double c = project(hb, other);
      if (other == beta)
        CHECK(c == doctest::Approx(1.0).epsilon(1e-10));
      else
        CHECK(std::abs(c) < 1e-9);
    }
  }
}

TEST_CASE("decompose/reconstruct roundtrip on random fields") {
  Grid g(40.0, 1601);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Field r(g, Frame::similarity, 0.0);
    for (int i = 0; i < g.n_points; ++i) r[i] = dist(rng);
    ModeDecomposition dec = decompose(r, 30.0, 3.0);
    Field back = reconstruct(dec);
    double err = 0.0;
    for (int i = 0; i < g.n_points; ++i) err = std::max(err, std::abs(back[i] - r[i]));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("decomposition is a projection (idempotent parts)") {
  Grid g(40.0, 1601);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> dist(0.0, 1.0);
  Field r(g, Frame::similarity, 0.0);
  for (int i = 0; i < g.n_points; ++i) r[i] = dist(rng) * std::exp(-0.01 * g.node(i) * g.node(i));
  ModeDecomposition dec = decompose(r, 30.0, 3.0);
  // low modes of q_minus vanish
  for (int beta = 0; beta <= 2; ++beta) CHECK(std::abs(project(dec.q_minus, beta)) < 1e-8);
  ModeDecomposition dec2 = decompose(reconstruct(dec), dec.s, dec.K);
  CHECK(dec2.q0 == doctest::Approx(dec.q0).epsilon(1e-8));
  CHECK(dec2.q1 == doctest::Approx(dec.q1).epsilon(1e-8));
  CHECK(dec2.q2 == doctest::Approx(dec.q2).epsilon(1e-8));
}

TEST_CASE("a pure quadratic mode is recovered") {
  // supported well inside the cutoff plateau: chi = 1 where h2 chi differs from h2
  Grid g(60.0, 4801);
  double s = 25.0, K = 4.0;  // plateau |y| <= 20, Gaussian mass beyond is ~0
  Field r = Field::sample(g, Frame::similarity, 0.0, [s, K](double y) {
    return hermite_poly(2, y) * cutoff_chi(y, s, K);
  });
  ModeDecomposition dec = decompose(r, s, K);
  CHECK(dec.q2 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(dec.q0) < 1e-8);
  CHECK(std::abs(dec.q1) < 1e-8);
  // inside the cutoff plateau the quadratic mode absorbs everything; outside,
  // q_minus carries the (cubically weighted) mode tails
  double plateau = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    if (std::abs(g.node(i)) <= K * std::sqrt(s) - 1.0)
      plateau = std::max(plateau, std::abs(dec.q_minus[i]));
  CHECK(plateau < 1e-6);
  CHECK(weighted_sup_cubic(dec.q_minus) < 0.05);
}

TEST_CASE("weighted cubic sup") {
  Grid g(10.0, 1001);
  Field f = Field::sample(g, Frame::similarity, 0.0,
                          [](double y) { return y * y * y; });
  // |y^3|/(1+|y|^3) < 1, approaches 1 at the edge
  double v = weighted_sup_cubic(f);
  CHECK(v < 1.0);
  CHECK(v == doctest::Approx(1000.0 / 1001.0).epsilon(1e-12));
}

TEST_CASE("shrinking bounds and membership") {
  ShrinkingParams sp(10.0, 50.0);
  double s = 30.0;
  CHECK(sp.bound_q0(s) == doctest::Approx(50.0 / 900.0));
  CHECK(sp.bound_q2(s) == doctest::Approx(2500.0 * std::log(30.0) / 900.0));
  CHECK(sp.envelope(s) == doctest::Approx(std::pow(50.0, 7) * std::log(30.0) / 30.0));

  Grid g(40.0, 801);
  ModeDecomposition zero;
  zero.q_minus = Field(g, Frame::similarity, 0.0);
  zero.q_e = Field(g, Frame::similarity, 0.0);
  zero.s = s;
  zero.K = 10.0;
  MembershipReport rep = shrinking_check(zero, s, sp);
  CHECK(rep.in_set);
  for (double m : rep.margins) CHECK(m > 0.0);

  ModeDecomposition bad = zero;
  bad.q0 = 1.1 * sp.bound_q0(s);
  MembershipReport rep2 = shrinking_check(bad, s, sp);
  CHECK_FALSE(rep2.in_set);
  CHECK(rep2.margins[0] < 0.0);
  for (int i = 1; i < 5; ++i) CHECK(rep2.margins[i] > 0.0);
}

TEST_CASE("membership csv row shape") {
  std::string header = MembershipReport::csv_header();
  int commas = 0;
  for (char c : header) commas += (c == ',');
  MembershipReport rep;
  rep.s = 30.0;
  std::string row = rep.csv_row();
  int row_commas = 0;
  for (char c : row) row_commas += (c == ',');
  CHECK(commas == row_commas);
}
