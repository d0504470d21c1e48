#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "blowup/spectral.hpp"

using namespace blowup;

namespace {

// independent oracle: trapezoid against rho on [-40,40], far past any mass
double rho_integral(const std::function<double(double)>& f, int n = 400001) {
  const double a = -40.0, b = 40.0, h = (b - a) / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double y = a + i * h;
    double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * f(y) * std::exp(-0.25 * y * y);
  }
  return acc * h / std::sqrt(4.0 * M_PI);
}

double dfact(int k) {  // (2k-1)!!
  double r = 1.0;
  for (int j = 2 * k - 1; j > 1; j -= 2) r *= j;
  return r;
}

}  // namespace

TEST_CASE("hermite polynomials, low orders in closed form") {
  for (double xi : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    CHECK(hermite_poly(0, xi) == doctest::Approx(1.0));
    CHECK(hermite_poly(1, xi) == doctest::Approx(xi));
    CHECK(hermite_poly(2, xi) == doctest::Approx(xi * xi - 2.0));
    CHECK(hermite_poly(3, xi) == doctest::Approx(xi * xi * xi - 6.0 * xi));
    CHECK(hermite_poly(4, xi) ==
          doctest::Approx(xi * xi * xi * xi - 12.0 * xi * xi + 12.0));
  }
}

TEST_CASE("hermite recurrence h_{k+1} = xi h_k - 2k h_{k-1}") {
  for (int k = 1; k <= 8; ++k)
    for (double xi : {-1.3, 0.2, 1.9}) {
      double lhs = hermite_poly(k + 1, xi);
      double rhs = xi * hermite_poly(k, xi) - 2.0 * k * hermite_poly(k - 1, xi);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("eigenvalues 1 - m/2") {
  CHECK(eigenvalue(0) == 1.0);
  CHECK(eigenvalue(1) == 0.5);
  CHECK(eigenvalue(2) == 0.0);
  CHECK(eigenvalue(3) == -0.5);
  CHECK(eigenvalue(6) == -2.0);
}

TEST_CASE("norms against the trapezoid oracle") {
  for (int ell = 0; ell <= 6; ++ell) {
    double oracle = rho_integral([ell](double y) {
      double h = hermite_poly(ell, y);
      return h * h;
    });
    CHECK(hermite_norm_sq(ell) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("quadrature: weights sum to 1, even moments exact") {
  auto rule = QuadratureRule::gauss_hermite(64);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
  // moments of rho: variance 2, so E y^{2k} = (2k-1)!! 2^k
  for (int k = 0; k <= 10; ++k) {
    double m = weighted_integral([k](double y) { return std::pow(y, 2 * k); }, rule);
    CHECK(m == doctest::Approx(dfact(k) * std::pow(2.0, k)).epsilon(1e-11));
    double modd =
        weighted_integral([k](double y) { return std::pow(y, 2 * k + 1); }, rule);
    // zero up to cancellation roundoff at the scale of the next even moment
    CHECK(std::abs(modd) < 1e-10 * dfact(k + 1) * std::pow(2.0, k + 1));
  }
}

TEST_CASE("quadrature matches the oracle on a non-polynomial") {
  auto rule = QuadratureRule::gauss_hermite(64);
  auto f = [](double y) { return std::cos(y) * std::exp(-0.05 * y * y); };
  CHECK(weighted_integral(f, rule) == doctest::Approx(rho_integral(f)).epsilon(1e-10));
}

TEST_CASE("orthogonality of the rescaled Hermite family") {
  auto rule = QuadratureRule::gauss_hermite(64);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) {
      double ip = weighted_integral(
          [a, b](double y) { return hermite_poly(a, y) * hermite_poly(b, y); }, rule);
      if (a == b)
        CHECK(ip == doctest::Approx(hermite_norm_sq(a)).epsilon(1e-11));
      else
        CHECK(std::abs(ip) < 1e-9 * std::sqrt(hermite_norm_sq(a) * hermite_norm_sq(b)));
    }
}

TEST_CASE("field integral agrees with the functional rule") {
  Grid g(40.0, 4001);
  auto f = [](double y) { return std::sin(y) + 0.3 * y * y; };
  Field fd = Field::sample(g, Frame::similarity, 0.0, f);
  auto rule = QuadratureRule::gauss_hermite(64);
  CHECK(weighted_integral(fd) ==
        doctest::Approx(weighted_integral(f, rule)).epsilon(1e-8));
}

TEST_CASE("semigroup acts diagonally on eigenfunctions") {
  Grid g(30.0, 6001);
  for (int m : {0, 1, 2, 3}) {
    for (double theta : {0.3, 0.9}) {
      Field hm = Field::sample(g, Frame::similarity, 0.0,
                               [m](double y) { return hermite_poly(m, y); });
      Field out = semigroup_apply(theta, hm);
      double fac = std::exp(eigenvalue(m) * theta);
      // compare on the core; the convolution truncates near the edge
      double err = 0.0, scale = 0.0;
      for (int i = 0; i < g.n_points; ++i) {
        double y = g.node(i);
        if (std::abs(y) > 10.0) continue;
        err = std::max(err, std::abs(out[i] - fac * hm[i]));
        scale = std::max(scale, std::abs(fac * hm[i]));
      }
      CHECK(err / scale < 1e-6);
    }
  }
}

TEST_CASE("semigroup chain rule e^{aL} e^{bL} = e^{(a+b)L}") {
  Grid g(20.0, 4001);
  Field f = Field::sample(g, Frame::similarity, 0.0,
                          [](double y) { return std::exp(-0.1 * y * y) * (1.0 + y); });
  Field two = semigroup_apply(0.3, semigroup_apply(0.4, f));
  Field one = semigroup_apply(0.7, f);
  double err = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    if (std::abs(g.node(i)) <= 10.0) err = std::max(err, std::abs(two[i] - one[i]));
  CHECK(err < 1e-8);
}

TEST_CASE("semigroup gradient contraction on random data") {
  Grid g(10.0, 401);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Field f(g, Frame::similarity, 0.0);
    // smooth random field: random Fourier-ish sum, bounded derivative
    double a1 = dist(rng), a2 = dist(rng), a3 = dist(rng);
    double k1 = 0.5 + std::abs(dist(rng)), k2 = 0.5 + std::abs(dist(rng));
    for (int i = 0; i < g.n_points; ++i) {
      double y = g.node(i);
      f[i] = a1 * std::sin(k1 * y) + a2 * std::cos(k2 * y) + a3;
    }
    for (double theta : {0.05, 0.2, 1.0}) {
      Field out = semigroup_apply(theta, f);
      double gsup = 0.0;
      double fsup = std::abs(a1) * k1 + std::abs(a2) * k2;
      const double h = g.spacing();
      for (int i = 1; i + 1 < g.n_points; ++i)
        if (std::abs(g.node(i)) <= 5.0)
          gsup = std::max(gsup, std::abs(out[i + 1] - out[i - 1]) / (2.0 * h));
      double bound = std::exp(theta) / std::sqrt(1.0 - std::exp(-theta)) *
                     std::min(1.0, std::sqrt(theta)) * fsup;
      // e^{theta L} gains one derivative at rate theta^{-1/2} for small theta
      worst = std::max(worst, gsup / bound);
    }
  }
  CHECK(worst < 1.5);
}
