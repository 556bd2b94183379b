#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adrflow/config.hpp"
#include "adrflow/diagnostics.hpp"

namespace adrflow {

/// Command options with exit-code contract:
///   0 ok, 1 validation fail, 2 config error, 3 integration error, 4 fit error.
struct CliOptions {
  std::optional<std::string> out_dir;
  bool force = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> traj_path;
};

int cmd_validate(const ExperimentConfig& cfg, const CliOptions& opts);
int cmd_run(const ExperimentConfig& cfg, const CliOptions& opts);
int cmd_rate(const ExperimentConfig& cfg, const CliOptions& opts);
int cmd_sweep(const ExperimentConfig& cfg, const CliOptions& opts);

/// Everything cmd_run needs, assembled and cross-checked from a config.
struct PreparedRun {
  ProblemSpec problem;
  DRParams params;
  ThetaSchedule theta;
  PerturbationSchedule perturbation;
  StepPolicy policy;
  RunSettings settings;
  /// Fixed point of RR derived from the analytic solution x* as
  /// x* + gamma*A(x*), available when A is single-valued.
  std::optional<VectorN> fixed_point;
};

PreparedRun prepare_run(const ExperimentConfig& cfg);

/// CSV with header exactly
///   t,residual,dist_to_solution,shadow_err,state_0..state_{n-1}
/// where dist_to_solution = |u(t) - fixed_point| and
/// shadow_err = |J_{gamma A}(u(t)) - solution|; both columns are blank when
/// the problem has no analytic solution. Values carry 17 significant digits
/// so parsing them back is lossless.
std::string trajectory_to_csv(const Trajectory& traj, const std::optional<VectorN>& fixed_point,
                              const std::optional<VectorN>& solution);

struct TrajectoryTable {
  std::vector<double> times;
  std::vector<double> residuals;
  std::vector<std::optional<double>> dist_to_solution;
  std::vector<VectorN> states;
};

TrajectoryTable read_trajectory_csv(const std::string& path);

/// Write-temp-then-rename, creating parent directories as needed.
void write_atomic(const std::string& path, const std::string& content);

std::string fmt17(double v);

}  // namespace adrflow
