#pragma once

#include <string>
#include <vector>

#include "blowup/shooting.hpp"

namespace blowup {

// Exit codes shared by the CLI and the pipeline.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;      // invalid config or corrupt output dir
constexpr int kExitDivergence = 3;  // numerical divergence
constexpr int kExitShooting = 4;    // bisection failed to trap
constexpr int kExitAcceptance = 5;  // a verification suite failed

/// Full description of one experiment; JSON-serializable.
struct ExperimentConfig {
  Params params;
  GridSpec grid;
  StepperConfig stepper;
  ShrinkingParams shrink;
  double s0 = 30.0;
  double horizon = 45.0;
  double shoot_tol = 1e-8;

  // Physical-frame stage. Run from profile data at s0_phys; the shooting
  // stage's s0 would give an unresolvably small blow-up time.
  double s0_phys = 10.0;
  double x_max = 0.2;
  int nx = 20001;
  PhysicalConfig physical;

  unsigned long long seed = 12345;
  std::string output_dir = "out";

  ExperimentConfig();

  /// Empty string when valid, otherwise a message naming the violated
  /// constraint.
  std::string validate() const;

  std::string to_json() const;
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

/// Resolves dir against the BLOWUPLAB_OUTPUT_ROOT env var (absolute paths
/// pass through unchanged).
std::string resolve_output_dir(const std::string& dir);

/// SHA-256 content hash, lowercase hex.
std::string sha256_hex(const std::string& data);

/// Binary snapshot store: magic, grid, then (time, values) per snapshot.
void write_snapshots(const std::string& path, const std::vector<double>& times,
                     const std::vector<Field>& fields);
bool read_snapshots(const std::string& path, std::vector<double>& times,
                    std::vector<Field>& fields);

/// shoot -> run_similarity -> analysis pipeline; writes config.json,
/// membership.csv, shoot_progress.csv, intermediate/final profile CSVs,
/// snapshot stores, summary.json and manifest.json into the output dir.
int cmd_run(const ExperimentConfig& cfg);

/// cmd_run once per value of the given axis (p, s0, K, A, h or ds);
/// aggregates summary.csv. Exit 0 iff all rows succeeded.
int cmd_sweep(const ExperimentConfig& base, const std::string& axis,
              const std::vector<double>& values);

/// Re-evaluates integrity and the verification suites of a finished output
/// dir from its stored files, without re-solving.
int cmd_check(const std::string& dir);

}  // namespace blowup
