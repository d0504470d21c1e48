#pragma once

#include <array>
#include <string>

#include "blowup/field.hpp"

namespace blowup {

/// C^2 cut-off profile: 1 on [0,1], 0 on [2,inf), quintic smoothstep on (1,2).
double cutoff_chi0(double xi);

/// chi(y,s) = chi0(|y| / (K sqrt(s))).
double cutoff_chi(double y, double s, double K);

/// The five-component expansion r = q0 + q1 y + q2 h2(y) + q_minus + q_e.
/// q2 is stored as the h2-coefficient.
struct ModeDecomposition {
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  Field q_minus;
  Field q_e;
  double s = 0.0;  // decomposition time (used in the cut-off)
  double K = 0.0;
};

/// P_beta(r_b) = integral of r_b h_beta rho / ||h_beta||^2.
double project(const Field& r_b, int beta);

ModeDecomposition decompose(const Field& r, double s, double K);

/// Exact inverse of decompose at the grid nodes.
Field reconstruct(const ModeDecomposition& dec);

/// max over grid nodes of |f(y)| / (1 + |y|^3).
double weighted_sup_cubic(const Field& f);

/// Shrinking-set constants; the per-component bounds below define V_{K,A}(s).
struct ShrinkingParams {
  double K = 10.0;
  double A = 50.0;

  ShrinkingParams() = default;
  ShrinkingParams(double K_, double A_) : K(K_), A(A_) {
    if (!(K >= 1.0) || !(A >= 1.0))
      throw std::invalid_argument("ShrinkingParams: need K >= 1 and A >= 1");
  }

  double bound_q0(double s) const { return A / (s * s); }
  double bound_q1(double s) const { return A / (s * s); }
  double bound_q2(double s) const { return A * A * std::log(s) / (s * s); }
  double bound_minus(double s) const {
    return std::pow(A, 6) * std::log(s) / std::pow(s, 2.5);
  }
  double bound_e(double s) const { return std::pow(A, 7) * std::log(s) / s; }
  /// Aggregate sup-norm envelope C A^7 ln s / s (C = 1 by convention here).
  double envelope(double s) const { return bound_e(s); }
};

struct MembershipReport {
  double s = 0.0;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0;
  double norm_minus = 0.0;  // || q_minus / (1+|y|^3) ||_inf
  double norm_e = 0.0;      // || q_e ||_inf
  std::array<double, 5> margins{};  // bound - |measured|, per component
  bool in_set = false;
  double aggregate_bound = 0.0;

  static const char* csv_header();
  std::string csv_row() const;
};

/// Component names in margin order: q0, q1, q2, q_minus, q_e.
extern const std::array<const char*, 5> kComponentNames;

MembershipReport shrinking_check(const ModeDecomposition& dec, double s,
                                 const ShrinkingParams& params);

}  // namespace blowup
