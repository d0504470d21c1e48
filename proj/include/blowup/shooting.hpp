#pragma once

#include <string>
#include <vector>

#include "blowup/solver.hpp"

namespace blowup {

/// Initial-data parameters; the search domain is the square [-2,2]^2.
struct ShotParams {
  double d0 = 0.0;
  double d1 = 0.0;
  double s0 = 30.0;

  void validate() const {
    if (std::abs(d0) > 2.0 || std::abs(d1) > 2.0)
      throw std::invalid_argument("ShotParams: (d0,d1) must lie in [-2,2]^2");
    if (!(s0 > 1.0)) throw std::invalid_argument("ShotParams: s0 must be > 1");
  }
};

/// psi(y) = (A/s0^2)(d0 + d1 y) chi0(2|y|/(K sqrt(s0))).
Field prepare_psi(const ShotParams& shot, double K, double A, const Grid& grid);

struct ExitReport {
  bool exited = false;
  std::vector<int> components;  // indices into kComponentNames
  double s_exit = 0.0;
  bool ambiguous = false;     // more than one component in the same snapshot
  int sign = 0;               // sign of the exiting q0 (or q1) at the crossing
  bool crossing_outgoing = false;  // d/ds (q_i - sign * bound) > 0 at exit
};

/// Names the violating component(s) of a recorded exit and, for q0/q1 exits,
/// checks the transverse-crossing sign by finite differences across the last
/// two snapshots.
ExitReport exit_classify(const RunRecord& record);

struct ShootConfig {
  double s0 = 30.0;
  double K = 10.0;
  double A = 50.0;
  double horizon = 45.0;
  double tol = 1e-8;
  GridSpec grid;
  StepperConfig stepper;
  Params params;

  ShootConfig();
};

struct ShootResult {
  bool success = false;
  std::string failure;  // empty on success
  double d0 = 0.0;
  double d1 = 0.0;
  double achieved_exit_time = 0.0;  // horizon when trapped
  bool trapped = false;
  RunRecord record;  // trajectory at (d0,d1)
  /// Every exit classified during the search (corners and midpoints).
  std::vector<ExitReport> search_exits;
  /// Progress log rows: level, center, radius, exit times of the 4 corners.
  std::vector<std::string> progress_rows;
  static const char* progress_header();
};

/// Bisection on the (d0,d1) square using the exit signs of the unstable
/// modes. Each level logs the four corner exit times and fails if all four
/// corners leave in the same direction.
ShootResult shoot(const ShootConfig& cfg);

}  // namespace blowup
