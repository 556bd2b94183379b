#include "adrflow/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "adrflow/errors.hpp"

namespace adrflow {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path resolve_path(const CliOptions& opts, const std::string& file) {
  fs::path p(file);
  if (p.is_absolute() || !opts.out_dir.has_value()) return p;
  return fs::path(*opts.out_dir) / p;
}

json check_to_json(const ConditionCheck& check) {
  return json{{"name", check.name}, {"slack", check.slack}, {"passed", check.passed}};
}

json report_to_json(const ValidationReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back(check_to_json(c));
  json violated = json::array();
  for (const auto& c : report.violated_conditions()) violated.push_back(check_to_json(c));
  return json{{"case_checked", to_string(report.case_checked)},
              {"passed", report.passed},
              {"checks", checks},
              {"violated_conditions", violated}};
}

struct ValidationOutcome {
  std::vector<ValidationReport> reports;
  bool passed = false;
};

ValidationOutcome run_validation(const DRParams& params, CaseSelect select) {
  ValidationOutcome outcome;
  if (select == CaseSelect::Auto) {
    for (CaseTag tag : {CaseTag::C1, CaseTag::C2, CaseTag::C3}) {
      outcome.reports.push_back(validate(params, tag));
      outcome.passed = outcome.passed || outcome.reports.back().passed;
    }
  } else {
    const CaseTag tag = select == CaseSelect::C1   ? CaseTag::C1
                        : select == CaseSelect::C2 ? CaseTag::C2
                                                   : CaseTag::C3;
    outcome.reports.push_back(validate(params, tag));
    outcome.passed = outcome.reports.back().passed;
  }
  return outcome;
}

json validation_to_json(const ValidationOutcome& outcome) {
  json reports = json::array();
  for (const auto& r : outcome.reports) reports.push_back(report_to_json(r));
  return json{{"passed", outcome.passed}, {"reports", reports}};
}

// A trajectory carrying an arbitrary sample series in its residual slot, so
// the rate fitters can run on columns read back from CSV.
Trajectory series_trajectory(std::vector<double> times, std::vector<double> values) {
  Trajectory traj;
  traj.times = std::move(times);
  traj.residuals = std::move(values);
  return traj;
}

struct CleanSeries {
  std::vector<double> t;
  std::vector<double> v;
};

// Drops nonpositive values and values within relative rounding distance of
// the series floor, which would otherwise flatten the tail of a decay fit.
CleanSeries clean_series(const std::vector<double>& times, const std::vector<double>& values) {
  double v_max = 0.0;
  for (double v : values) v_max = std::max(v_max, v);
  const double floor = v_max * 1e-12;
  CleanSeries out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > floor) {
      out.t.push_back(times[i]);
      out.v.push_back(values[i]);
    }
  }
  return out;
}

FitWindow tail_window(const CleanSeries& series, double fraction) {
  if (series.t.empty()) return {0.0, 0.0};
  const double lo = series.t.front();
  const double hi = series.t.back();
  return {hi - fraction * (hi - lo), hi};
}

struct FitPair {
  std::optional<RateReport> exponential;
  std::optional<RateReport> power;
};

FitPair fit_clean_series(const std::vector<double>& times, const std::vector<double>& values,
                         double window_fraction) {
  const CleanSeries clean = clean_series(times, values);
  const FitWindow window = tail_window(clean, window_fraction);
  const Trajectory traj = series_trajectory(clean.t, clean.v);
  FitPair pair;
  try {
    pair.exponential = fit_exponential(traj, ResidualSeries{}, window);
  } catch (const FitError&) {
  }
  try {
    pair.power = fit_power(traj, ResidualSeries{}, window);
  } catch (const FitError&) {
  }
  return pair;
}

json rate_report_to_json(const std::string& series, const RateReport& report) {
  json j{{"series", series},
         {"model", to_string(report.model)},
         {"fitted_value", report.fitted_value},
         {"r_squared", report.r_squared},
         {"window", {report.window.t_lo, report.window.t_hi}},
         {"used_samples", report.used_samples},
         {"dropped_samples", report.dropped_samples}};
  j["predicted_value"] =
      report.predicted_value.has_value() ? json(*report.predicted_value) : json(nullptr);
  j["predicted_provenance"] = report.predicted_provenance.has_value()
                                  ? json(to_string(*report.predicted_provenance))
                                  : json(nullptr);
  return j;
}

json vector_to_json(const VectorN& v) {
  json arr = json::array();
  for (std::size_t i = 0; i < v.dim(); ++i) arr.push_back(v[i]);
  return arr;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  cells.push_back(current);
  return cells;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
  }
  fs::rename(tmp, target);
}

PreparedRun prepare_run(const ExperimentConfig& cfg) {
  PreparedRun run;
  run.problem = cfg.build_problem();
  run.params = cfg.build_params();
  run.theta = cfg.build_theta();
  run.perturbation = cfg.build_perturbation();
  run.policy = cfg.build_step();
  run.settings = cfg.run_settings();
  if (run.settings.u0.dim() != run.problem.dim) {
    throw ConfigError("run.u0 has dimension " + std::to_string(run.settings.u0.dim()) +
                      " but the problem lives in dimension " + std::to_string(run.problem.dim));
  }
  if (run.perturbation.kind == PerturbationSchedule::Kind::PowerDecay &&
      run.perturbation.direction.dim() != run.problem.dim) {
    throw ConfigError("perturbation.direction dimension does not match the problem");
  }
  if (run.problem.analytic_solution.has_value() && run.problem.spec_a.direct_eval) {
    const VectorN& star = *run.problem.analytic_solution;
    run.fixed_point =
        add(star, scale(run.params.gamma, run.problem.spec_a.direct_eval(star)));
  }
  return run;
}

std::string trajectory_to_csv(const Trajectory& traj, const std::optional<VectorN>& fixed_point,
                              const std::optional<VectorN>& solution) {
  std::string out = "t,residual,dist_to_solution,shadow_err";
  const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().dim();
  for (std::size_t d = 0; d < dim; ++d) out += ",state_" + std::to_string(d);
  out += "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out += fmt17(traj.times[i]);
    out += "," + fmt17(traj.residuals[i]);
    out += ",";
    if (fixed_point.has_value()) out += fmt17(distance(traj.states[i], *fixed_point));
    out += ",";
    if (solution.has_value() && i < traj.shadows.size()) {
      out += fmt17(distance(traj.shadows[i], *solution));
    }
    for (std::size_t d = 0; d < dim; ++d) out += "," + fmt17(traj.states[i][d]);
    out += "\n";
  }
  return out;
}

TrajectoryTable read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trajectory CSV '" + path + "' is empty");
  const auto header = split_line(line);
  if (header.size() < 4 || header[0] != "t" || header[1] != "residual" ||
      header[2] != "dist_to_solution" || header[3] != "shadow_err") {
    throw ConfigError("trajectory CSV '" + path + "' has an unexpected header");
  }
  TrajectoryTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ConfigError("trajectory CSV '" + path + "': ragged row");
    }
    table.times.push_back(std::stod(cells[0]));
    table.residuals.push_back(std::stod(cells[1]));
    table.dist_to_solution.push_back(
        cells[2].empty() ? std::optional<double>{} : std::optional<double>{std::stod(cells[2])});
    if (cells.size() > 4) {
      std::vector<double> coords;
      for (std::size_t i = 4; i < cells.size(); ++i) coords.push_back(std::stod(cells[i]));
      table.states.push_back(VectorN(std::move(coords)));
    }
  }
  if (table.times.empty()) throw ConfigError("trajectory CSV '" + path + "' has no rows");
  return table;
}

int cmd_validate(const ExperimentConfig& cfg, const CliOptions& opts) {
  try {
    const DRParams params = cfg.build_params();
    const RunSettings settings = cfg.run_settings();
    const ValidationOutcome outcome = run_validation(params, settings.case_select);
    write_atomic(resolve_path(opts, cfg.output_paths().validation_json).string(),
                 validation_to_json(outcome).dump(2) + "\n");
    return outcome.passed ? 0 : 1;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }
}

int cmd_run(const ExperimentConfig& cfg, const CliOptions& opts) {
  PreparedRun run;
  try {
    run = prepare_run(cfg);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }

  const ValidationOutcome outcome = run_validation(run.params, run.settings.case_select);
  write_atomic(resolve_path(opts, cfg.output_paths().validation_json).string(),
               validation_to_json(outcome).dump(2) + "\n");
  if (!outcome.passed && !opts.force) {
    std::cerr << "parameter validation failed for case " << to_string(run.settings.case_select)
              << "; rerun with --force to integrate anyway\n";
    return 1;
  }

  Trajectory traj;
  try {
    traj = integrate(run.problem.spec_a, run.problem.spec_b, run.params, run.theta,
                     run.perturbation, run.settings.u0, run.settings.t_end, run.policy);
  } catch (const Error& err) {
    std::cerr << "integration error: " << err.what() << "\n";
    return 3;
  }

  write_atomic(resolve_path(opts, cfg.output_paths().trajectory_csv).string(),
               trajectory_to_csv(traj, run.fixed_point, run.problem.analytic_solution));
  return 0;
}

int cmd_rate(const ExperimentConfig& cfg, const CliOptions& opts) {
  PreparedRun run;
  try {
    run = prepare_run(cfg);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }

  TrajectoryTable table;
  try {
    const std::string path = opts.traj_path.has_value()
                                 ? *opts.traj_path
                                 : resolve_path(opts, cfg.output_paths().trajectory_csv).string();
    table = read_trajectory_csv(path);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }

  const double fraction = cfg.rate_window_fraction();
  const FitPair residual_fits = fit_clean_series(table.times, table.residuals, fraction);

  FitPair distance_fits;
  {
    std::vector<double> t, v;
    for (std::size_t i = 0; i < table.times.size(); ++i) {
      if (table.dist_to_solution[i].has_value()) {
        t.push_back(table.times[i]);
        v.push_back(*table.dist_to_solution[i]);
      }
    }
    if (t.size() >= 10) distance_fits = fit_clean_series(t, v, fraction);
  }

  // Predicted rates from whatever moduli the problem certifies.
  std::optional<double> zeta;
  if (run.problem.spec_a.lipschitz_const.has_value()) {
    try {
      zeta = lipschitz_zeta(run.params, *run.problem.spec_a.lipschitz_const);
    } catch (const InvalidParameterError&) {
    }
  }

  std::optional<SubregularityEstimate> kappa_estimate;
  try {
    VectorN anchor = run.fixed_point.has_value()
                         ? *run.fixed_point
                         : find_fixed_point(run.problem.spec_a, run.problem.spec_b, run.params,
                                            run.settings.u0);
    const double radius = std::max(1.0, distance(run.settings.u0, anchor));
    const std::uint64_t seed = opts.seed.value_or(run.settings.seed);
    kappa_estimate = estimate_kappa(run.problem.spec_a, run.problem.spec_b, run.params, anchor,
                                    radius, 2000, seed);
  } catch (const Error&) {
  }

  PredictedRates predictions;
  bool have_predictions = false;
  if (zeta.has_value() || kappa_estimate.has_value()) {
    predictions = predict_rate(
        run.params, run.theta,
        kappa_estimate.has_value() ? std::optional<double>(kappa_estimate->kappa_hat)
                                   : std::nullopt,
        zeta, run.settings.t_end);
    have_predictions = true;
  }

  FitPair residual_annotated = residual_fits;
  if (residual_annotated.power.has_value() && run.theta.horizon_infimum(run.settings.t_end) > 0.0 &&
      run.perturbation.iterated_integral_finite(run.theta)) {
    residual_annotated.power->predicted_value = 0.5;
    residual_annotated.power->predicted_provenance = RatePrediction::SqrtRegularity;
  }
  FitPair distance_annotated = distance_fits;
  if (distance_annotated.exponential.has_value() && have_predictions) {
    if (predictions.zeta_rate.has_value()) {
      distance_annotated.exponential->predicted_value = *predictions.zeta_rate;
      distance_annotated.exponential->predicted_provenance = RatePrediction::ZetaBased;
    } else if (predictions.kappa_constant_rate.has_value()) {
      distance_annotated.exponential->predicted_value = *predictions.kappa_constant_rate;
      distance_annotated.exponential->predicted_provenance = RatePrediction::KappaBased;
    }
  }
  if (distance_annotated.power.has_value() && have_predictions &&
      predictions.kappa_power_exponent.has_value()) {
    distance_annotated.power->predicted_value = *predictions.kappa_power_exponent;
    distance_annotated.power->predicted_provenance = RatePrediction::KappaBased;
  }

  json fits = json::array();
  int successful = 0;
  for (const auto& [series, report] :
       std::initializer_list<std::pair<const char*, const std::optional<RateReport>*>>{
           {"residual", &residual_annotated.exponential},
           {"residual", &residual_annotated.power},
           {"distance", &distance_annotated.exponential},
           {"distance", &distance_annotated.power}}) {
    if (report->has_value()) {
      fits.push_back(rate_report_to_json(series, **report));
      ++successful;
    }
  }
  if (successful == 0) {
    std::cerr << "fit error: no series in the trajectory had enough usable samples\n";
    return 4;
  }

  json doc{{"fits", fits}};
  json pred = json::object();
  if (have_predictions) {
    if (predictions.kappa_constant_rate.has_value()) {
      pred["kappa_constant_rate"] = *predictions.kappa_constant_rate;
    }
    if (predictions.kappa_power_exponent.has_value()) {
      pred["kappa_power_exponent"] = *predictions.kappa_power_exponent;
    }
    if (predictions.zeta_rate.has_value()) pred["zeta_rate"] = *predictions.zeta_rate;
    if (zeta.has_value()) pred["zeta"] = *zeta;
  }
  doc["predictions"] = pred;
  if (kappa_estimate.has_value()) {
    doc["kappa_estimate"] = json{{"kappa_hat", kappa_estimate->kappa_hat},
                                 {"radius", kappa_estimate->radius},
                                 {"samples", kappa_estimate->samples},
                                 {"anchor", vector_to_json(kappa_estimate->anchor)}};
  } else {
    doc["kappa_estimate"] = nullptr;
  }

  write_atomic(resolve_path(opts, cfg.output_paths().rate_json).string(), doc.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const CliOptions& opts) {
  std::vector<SweepAxis> axes;
  try {
    axes = cfg.sweep_axes();
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }

  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::size_t> cursor(axes.size(), 0);
  while (true) {
    cells.push_back(cursor);
    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++cursor[d] < axes[d].values.size()) break;
      cursor[d] = 0;
      if (d == 0) {
        d = axes.size() + 1;  // full wrap: product exhausted
        break;
      }
    }
    if (axes.empty() || d > axes.size()) break;
  }

  std::string summary = "cell";
  for (const auto& axis : axes) summary += "," + axis.key;
  summary += ",status,final_residual,exp_rate,exp_r2,power_exponent,power_r2,wall_clock_s\n";

  const double fraction = cfg.rate_window_fraction();
  int successes = 0;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    char cell_name[16];
    std::snprintf(cell_name, sizeof(cell_name), "%03zu", cell);
    std::string row = cell_name;
    ExperimentConfig cell_cfg = cfg;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      const std::string& value = axes[d].values[cells[cell][d]];
      cell_cfg.set_value(axes[d].key, value);
      row += "," + value;
    }

    const auto started = std::chrono::steady_clock::now();
    std::string status = "ok";
    std::string metrics = ",,,,,";  // blank final_residual..power_r2 when the cell fails
    try {
      const PreparedRun run = prepare_run(cell_cfg);
      const ValidationOutcome outcome =
          run_validation(run.params, run.settings.case_select);
      if (!outcome.passed && !opts.force) {
        status = "validation_failed";
      } else {
        const Trajectory traj =
            integrate(run.problem.spec_a, run.problem.spec_b, run.params, run.theta,
                      run.perturbation, run.settings.u0, run.settings.t_end, run.policy);
        write_atomic(
            resolve_path(opts, std::string("cell_") + cell_name + "_trajectory.csv").string(),
            trajectory_to_csv(traj, run.fixed_point, run.problem.analytic_solution));

        // Fit the distance series when a fixed point is known, else the residual.
        std::vector<double> values;
        if (run.fixed_point.has_value()) {
          values.reserve(traj.states.size());
          for (const auto& state : traj.states) {
            values.push_back(distance(state, *run.fixed_point));
          }
        } else {
          values = traj.residuals;
        }
        const FitPair fits = fit_clean_series(traj.times, values, fraction);
        metrics = "," + fmt17(traj.residuals.back());
        metrics += fits.exponential.has_value()
                       ? "," + fmt17(fits.exponential->fitted_value) + "," +
                             fmt17(fits.exponential->r_squared)
                       : ",,";
        metrics += fits.power.has_value()
                       ? "," + fmt17(fits.power->fitted_value) + "," + fmt17(fits.power->r_squared)
                       : ",,";
        ++successes;
      }
    } catch (const ConfigError&) {
      status = "config_error";
    } catch (const StepPolicyError&) {
      status = "step_policy_error";
    } catch (const Error&) {
      status = "integration_error";
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    row += "," + status + metrics + "," + fmt17(wall) + "\n";
    summary += row;
  }

  write_atomic(resolve_path(opts, cfg.output_paths().sweep_csv).string(), summary);
  return successes > 0 ? 0 : 3;
}

}  // namespace adrflow
