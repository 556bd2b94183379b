#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adrflow/adr.hpp"
#include "adrflow/dynamics.hpp"
#include "adrflow/problems.hpp"

namespace adrflow {

enum class CaseSelect { C1, C2, C3, Auto };

std::string to_string(CaseSelect c);

struct RunSettings {
  double t0 = 1.0;
  double t_end = 10.0;
  std::uint64_t seed = 0;
  CaseSelect case_select = CaseSelect::Auto;
  VectorN u0;
};

struct OutputPaths {
  std::string trajectory_csv = "trajectory.csv";
  std::string rate_json = "rate.json";
  std::string validation_json = "validation.json";
  std::string sweep_csv = "sweep_summary.csv";
};

/// One sweep axis: a dotted config key plus the values it cycles through.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Experiment description parsed from the INI-style config format
/// ([section] headers, `key = value` lines, full-line # comments). The
/// schema is strict: unknown sections or keys are rejected so typos in the
/// parameter names cannot pass silently. The raw key/value text is kept so a
/// config round-trips losslessly through serialize()/parse().
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);

  [[nodiscard]] std::string serialize() const;

  /// Override one value by dotted key ("params.epsilon"); used by sweeps.
  void set_value(const std::string& dotted_key, const std::string& value);

  [[nodiscard]] ProblemSpec build_problem() const;
  [[nodiscard]] DRParams build_params() const;
  [[nodiscard]] ThetaSchedule build_theta() const;
  [[nodiscard]] PerturbationSchedule build_perturbation() const;
  [[nodiscard]] StepPolicy build_step() const;
  [[nodiscard]] RunSettings run_settings() const;
  [[nodiscard]] OutputPaths output_paths() const;
  [[nodiscard]] std::vector<SweepAxis> sweep_axes() const;
  [[nodiscard]] double rate_window_fraction() const;

  /// Non-fatal findings (perturbation outside L1, ...), for the CLI to print.
  [[nodiscard]] std::vector<std::string> warnings() const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };

  [[nodiscard]] const Section* find_section(const std::string& name) const;
  [[nodiscard]] std::optional<std::string> get(const std::string& section,
                                               const std::string& key) const;
  [[nodiscard]] std::string require(const std::string& section, const std::string& key) const;

  std::vector<Section> sections_;
};

}  // namespace adrflow
