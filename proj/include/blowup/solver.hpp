#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blowup/decomposition.hpp"
#include "blowup/field.hpp"
#include "blowup/model.hpp"

namespace blowup {

struct GridSpec {
  double y_max = 201.0;
  int n_points = 4021;

  GridSpec() = default;
  GridSpec(double ymax, int n) : y_max(ymax), n_points(n) { (void)grid(); }
  Grid grid() const { return Grid(y_max, n_points); }
  double spacing() const { return grid().spacing(); }
};

enum class Scheme { imex_euler, imex_bdf2 };
enum class Boundary { dirichlet_profile, extrapolation };

struct StepperConfig {
  double ds = 4e-4;
  Scheme scheme = Scheme::imex_euler;
  Boundary boundary = Boundary::dirichlet_profile;
  /// Centered drift differences inside this radius, first-order upwind
  /// outside (where the solution is pinned near zero anyway). Defaults to
  /// the whole grid.
  double upwind_radius = 1e300;
  double snapshot_interval = 0.05;

  /// Stability bound for the explicit part.
  void validate(double h) const {
    if (!(ds > 0.0)) throw std::invalid_argument("StepperConfig: ds must be > 0");
    if (ds > 0.5 * h * h)
      throw std::invalid_argument("StepperConfig: ds exceeds the stability bound h^2/2");
  }
};

/// Toggles for the lower-order terms of the q-equation; tests use these to
/// isolate the linear dynamics.
struct TermToggles {
  bool potential = true;
  bool nonlinear = true;
  bool remainder = true;
};

/// Second-order gradient: centered in the interior, one-sided at the ends.
Field gradient(const Field& f);

/// One IMEX step of d_s q = (L+V) q + B(q) + R: diffusion implicit
/// (tridiagonal solve), drift/unit/V/B/R explicit.
Field step_q(const Field& q, double s, const StepperConfig& cfg, const Params& params,
             const TermToggles& toggles = {});

/// One IMEX step of the similarity equation for w itself.
Field step_w(const Field& w, double s, const StepperConfig& cfg, const Params& params);

struct ExitEvent {
  std::vector<int> components;  // indices into kComponentNames
  double s_exit = 0.0;
};

struct RunRecord {
  double s0 = 0.0;
  double s_end = 0.0;
  ShrinkingParams shrink;
  std::vector<MembershipReport> reports;     // one per snapshot
  std::vector<double> snapshot_s;
  std::vector<Field> snapshots;              // q at snapshot times (optional)
  bool exited = false;
  ExitEvent exit;
  bool diverged = false;
  double s_diverged = 0.0;
  bool reached_end = false;
};

/// Integrate the q-equation from s0 to s_end, decomposing every snapshot
/// interval; stops early on exit from V_{K,A} or on numerical divergence
/// (reported distinctly).
RunRecord run_similarity(const Field& q0, double s0, double s_end, const StepperConfig& cfg,
                         const Params& params, const ShrinkingParams& shrink,
                         bool store_fields = true);

struct PhysicalConfig {
  double dt_factor = 0.002;     // dt = dt_factor * ||u||_inf^{1-p}
  double stop_ratio = 3e-7;     // stop when ||u||^{1-p} <= stop_ratio * initial
  double snapshot_ratio = 0.9;  // geometric snapshot spacing in ||u||^{1-p}
  int t_est_window = 20;
  int decay_window = 400;       // sustained decrease => non-blow-up verdict
  long max_steps = 5'000'000;
};

struct PhysicalRun {
  bool blew_up = false;
  std::string verdict;  // "blow-up" or "non-blow-up"
  double T_est = 0.0;
  std::vector<double> t;        // snapshot times
  std::vector<Field> snapshots; // u at snapshot times
  std::vector<double> sup_norm;
};

/// Integrate d_t u = Lap u + |u|^{p-1} u with adaptive dt and Neumann
/// boundaries; estimates the blow-up time by linear extrapolation of
/// ||u||^{1-p} and stores snapshots geometrically spaced in T - t.
PhysicalRun run_physical(const Field& u0, const PhysicalConfig& cfg, const Params& params);

}  // namespace blowup
