#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blowup/harness.hpp"

namespace {

void add_config_flags(CLI::App* app, blowup::ExperimentConfig& cfg, std::string& config_file) {
  app->add_option("--config", config_file, "JSON config file (flags override its values)");
  app->add_option("--p", cfg.params.p, "nonlinearity exponent (> 1)");
  app->add_option("--dim", cfg.params.N, "space dimension");
  app->add_option("--y-max", cfg.grid.y_max, "half-width of the similarity grid");
  app->add_option("--n-points", cfg.grid.n_points, "similarity grid points (odd)");
  app->add_option("--ds", cfg.stepper.ds, "similarity time step");
  app->add_option("--snapshot-interval", cfg.stepper.snapshot_interval,
                  "decomposition interval in s");
  app->add_option("--upwind-radius", cfg.stepper.upwind_radius,
                  "centered drift differences inside this |y|");
  app->add_option("--K", cfg.shrink.K, "cut-off constant");
  app->add_option("--A", cfg.shrink.A, "shrinking-set amplitude");
  app->add_option("--s0", cfg.s0, "initial similarity time");
  app->add_option("--horizon", cfg.horizon, "trapping horizon in s");
  app->add_option("--shoot-tol", cfg.shoot_tol, "bisection square tolerance");
  app->add_option("--s0-phys", cfg.s0_phys, "profile start time of the physical stage");
  app->add_option("--x-max", cfg.x_max, "half-width of the physical grid");
  app->add_option("--nx", cfg.nx, "physical grid points (odd)");
  app->add_option("--dt-factor", cfg.physical.dt_factor, "dt = dt_factor ||u||^{1-p}");
  app->add_option("--seed", cfg.seed, "seed for randomized property tests");
  app->add_option("--output-dir,-o", cfg.output_dir,
                  "output directory (relative paths resolve against BLOWUPLAB_OUTPUT_ROOT)");
}

blowup::ExperimentConfig merge_config(const CLI::App* app, const blowup::ExperimentConfig& flags,
                                      const std::string& config_file) {
  if (config_file.empty()) return flags;
  blowup::ExperimentConfig cfg = blowup::ExperimentConfig::from_file(config_file);
  // Values given explicitly on the command line win over the file.
  blowup::ExperimentConfig defaults;
  auto set = [&](const char* name, auto member) {
    if (app->count(name) > 0) cfg.*member = flags.*member;
  };
  using EC = blowup::ExperimentConfig;
  set("--s0", &EC::s0);
  set("--horizon", &EC::horizon);
  set("--shoot-tol", &EC::shoot_tol);
  set("--s0-phys", &EC::s0_phys);
  set("--x-max", &EC::x_max);
  set("--nx", &EC::nx);
  set("--seed", &EC::seed);
  set("--output-dir", &EC::output_dir);
  if (app->count("--p")) cfg.params.p = flags.params.p;
  if (app->count("--dim")) cfg.params.N = flags.params.N;
  if (app->count("--y-max")) cfg.grid.y_max = flags.grid.y_max;
  if (app->count("--n-points")) cfg.grid.n_points = flags.grid.n_points;
  if (app->count("--ds")) cfg.stepper.ds = flags.stepper.ds;
  if (app->count("--snapshot-interval"))
    cfg.stepper.snapshot_interval = flags.stepper.snapshot_interval;
  if (app->count("--upwind-radius")) cfg.stepper.upwind_radius = flags.stepper.upwind_radius;
  if (app->count("--K")) cfg.shrink.K = flags.shrink.K;
  if (app->count("--A")) cfg.shrink.A = flags.shrink.A;
  if (app->count("--dt-factor")) cfg.physical.dt_factor = flags.physical.dt_factor;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blowup: numerical laboratory for single-point blow-up of u_t = u_xx + |u|^{p-1}u"};
  app.require_subcommand(1);

  blowup::ExperimentConfig cfg;
  std::string config_file;

  CLI::App* run = app.add_subcommand("run", "shoot, trap and verify one experiment");
  add_config_flags(run, cfg, config_file);

  CLI::App* sweep = app.add_subcommand("sweep", "repeat run across one parameter axis");
  std::string axis;
  std::vector<double> values;
  add_config_flags(sweep, cfg, config_file);
  sweep->add_option("--axis", axis, "parameter to sweep: p, s0, K, A, h or ds")->required();
  sweep->add_option("--values", values, "axis values");

  CLI::App* check = app.add_subcommand("check", "re-verify a finished output directory");
  std::string check_dir;
  check->add_option("dir", check_dir, "output directory of a previous run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return blowup::cmd_run(merge_config(run, cfg, config_file));
    if (sweep->parsed())
      return blowup::cmd_sweep(merge_config(sweep, cfg, config_file), axis, values);
    if (check->parsed()) return blowup::cmd_check(check_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return blowup::kExitConfig;
  }
  return blowup::kExitConfig;
}
