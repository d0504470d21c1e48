#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blowup/analysis.hpp"

namespace blowup {

struct ExperimentConfig;  // harness.hpp

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// x0 samples spanning one decade above the frozen region
/// |x| < K sqrt((T - t_last)|ln(T - t_last)|) of the stored run.
std::vector<double> final_probe_points(const TrajectoryStore& store, double K, int n = 9);

/// Bounds on the intermediate-profile error ratios.
std::vector<SuiteResult> evaluate_intermediate_suites(const ProfileFitReport& inter_u,
                                                      const ProfileFitReport& inter_g);

/// Ratio windows and monotonicity for the final profiles.
std::vector<SuiteResult> evaluate_final_suites(const ProfileFitReport& fin_u,
                                               const ProfileFitReport& fin_g);

/// Both of the above, in order.
std::vector<SuiteResult> evaluate_profile_suites(const ProfileFitReport& inter_u,
                                                 const ProfileFitReport& inter_g,
                                                 const ProfileFitReport& fin_u,
                                                 const ProfileFitReport& fin_g);

/// Full per-run suites: membership plus the profile suites.
std::vector<SuiteResult> evaluate_run_suites(const RunRecord& rec,
                                             const ProfileFitReport& inter_u,
                                             const ProfileFitReport& inter_g,
                                             const ProfileFitReport& fin_u,
                                             const ProfileFitReport& fin_g);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the nine verification criteria end to end, logging progress to
/// `log`. Heavy artifacts (the shooting run, the physical run) are computed
/// once and shared across criteria.
std::vector<CriterionResult> run_acceptance(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace blowup
