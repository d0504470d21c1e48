#include "blowup/decomposition.hpp"

#include "blowup/spectral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blowup {

const std::array<const char*, 5> kComponentNames = {"q0", "q1", "q2", "q_minus", "q_e"};

double cutoff_chi0(double xi) {
  if (xi <= 1.0) return 1.0;
  if (xi >= 2.0) return 0.0;
  const double t = xi - 1.0;
  const double smooth = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));  // quintic smoothstep
  return 1.0 - smooth;
}

double cutoff_chi(double y, double s, double K) {
  if (!(s > 0.0) || !(K > 0.0))
    throw std::invalid_argument("cutoff_chi: need s > 0 and K > 0");
  return cutoff_chi0(std::abs(y) / (K * std::sqrt(s)));
}

double project(const Field& r_b, int beta) {
  if (beta < 0) throw std::invalid_argument("project: beta must be >= 0");
  Field integrand = r_b;
  for (int i = 0; i < integrand.size(); ++i)
    integrand[i] = r_b[i] * hermite_poly(beta, r_b.grid.node(i));
  return weighted_integral(integrand) / hermite_norm_sq(beta);
}

ModeDecomposition decompose(const Field& r, double s, double K) {
  ModeDecomposition dec;
  dec.s = s;
  dec.K = K;

  const Grid& g = r.grid;
  Field r_b(g, r.frame, r.time);
  dec.q_e = Field(g, r.frame, r.time);
  for (int i = 0; i < g.n_points; ++i) {
    double chi = cutoff_chi(g.node(i), s, K);
    r_b[i] = chi * r[i];
    dec.q_e[i] = (1.0 - chi) * r[i];
  }

  dec.q0 = project(r_b, 0);
  dec.q1 = project(r_b, 1);
  dec.q2 = project(r_b, 2);

  dec.q_minus = Field(g, r.frame, r.time);
  for (int i = 0; i < g.n_points; ++i) {
    double y = g.node(i);
    dec.q_minus[i] = r_b[i] - dec.q0 - dec.q1 * y - dec.q2 * hermite_poly(2, y);
  }
  return dec;
}

Field reconstruct(const ModeDecomposition& dec) {
  const Grid& g = dec.q_minus.grid;
  Field r(g, dec.q_minus.frame, dec.q_minus.time);
  for (int i = 0; i < g.n_points; ++i) {
    double y = g.node(i);
    r[i] = dec.q0 + dec.q1 * y + dec.q2 * hermite_poly(2, y) + dec.q_minus[i] + dec.q_e[i];
  }
  return r;
}

double weighted_sup_cubic(const Field& f) {
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    double y = std::abs(f.grid.node(i));
    m = std::max(m, std::abs(f[i]) / (1.0 + y * y * y));
  }
  return m;
}

const char* MembershipReport::csv_header() {
  return "s,q0,q1,q2,norm_minus,norm_e,margin_q0,margin_q1,margin_q2,margin_minus,margin_e,in_set";
}

std::string MembershipReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << s << ',' << q0 << ',' << q1 << ',' << q2 << ',' << norm_minus << ',' << norm_e;
  for (double m : margins) os << ',' << m;
  os << ',' << (in_set ? 1 : 0);
  return os.str();
}

MembershipReport shrinking_check(const ModeDecomposition& dec, double s,
                                 const ShrinkingParams& params) {
  if (!(s > 1.0)) throw std::invalid_argument("shrinking_check: need s > 1");
  MembershipReport rep;
  rep.s = s;
  rep.q0 = dec.q0;
  rep.q1 = dec.q1;
  rep.q2 = dec.q2;
  rep.norm_minus = weighted_sup_cubic(dec.q_minus);
  rep.norm_e = dec.q_e.sup_norm();
  rep.margins[0] = params.bound_q0(s) - std::abs(dec.q0);
  rep.margins[1] = params.bound_q1(s) - std::abs(dec.q1);
  rep.margins[2] = params.bound_q2(s) - std::abs(dec.q2);
  rep.margins[3] = params.bound_minus(s) - rep.norm_minus;
  rep.margins[4] = params.bound_e(s) - rep.norm_e;
  rep.in_set = true;
  for (double m : rep.margins)
    if (m < 0.0) rep.in_set = false;
  rep.aggregate_bound = params.envelope(s);
  return rep;
}

}  // namespace blowup
