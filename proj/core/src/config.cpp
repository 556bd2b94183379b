#include "adrflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "adrflow/errors.hpp"

namespace adrflow {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> kSchema = {
      {"problem", {"kind", "label", "a", "p", "b", "q", "w", "mA", "cA", "mB", "cB"}},
      {"params", {"mode", "alpha", "beta", "gamma", "delta", "lambda", "mu", "epsilon"}},
      {"theta", {"kind", "value", "m"}},
      {"perturbation", {"kind", "p", "c", "direction"}},
      {"run", {"t0", "t_end", "seed", "case", "u0"}},
      {"step", {"kind", "dt", "eps_cap"}},
      {"output", {"trajectory_csv", "rate_json", "validation_json", "sweep_csv"}},
      {"rate", {"window_fraction"}},
  };
  return kSchema;
}

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& section, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw ConfigError(section + "." + key + ": cannot parse number from '" + raw + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& section, const std::string& key,
                         const std::string& raw) {
  const std::string value = trim(raw);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw ConfigError(section + "." + key + ": cannot parse integer from '" + raw + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  return parts;
}

VectorN parse_vector(const std::string& section, const std::string& key, const std::string& raw) {
  std::vector<double> coords;
  for (const auto& part : split(raw, ',')) {
    coords.push_back(parse_double(section, key, part));
  }
  return VectorN(std::move(coords));
}

Eigen::MatrixXd parse_matrix(const std::string& section, const std::string& key,
                             const std::string& raw) {
  const auto rows = split(raw, ';');
  std::vector<std::vector<double>> values;
  for (const auto& row : rows) {
    std::vector<double> cells;
    for (const auto& cell : split(row, ',')) {
      cells.push_back(parse_double(section, key, cell));
    }
    if (!values.empty() && cells.size() != values.front().size()) {
      throw ConfigError(section + "." + key + ": ragged matrix rows");
    }
    values.push_back(std::move(cells));
  }
  Eigen::MatrixXd m(values.size(), values.front().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.front().size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
    }
  }
  return m;
}

}  // namespace

std::string to_string(CaseSelect c) {
  switch (c) {
    case CaseSelect::C1: return "C1";
    case CaseSelect::C2: return "C2";
    case CaseSelect::C3: return "C3";
    case CaseSelect::Auto: return "auto";
  }
  return "?";
}

const ExperimentConfig::Section* ExperimentConfig::find_section(const std::string& name) const {
  for (const auto& section : sections_) {
    if (section.name == name) return &section;
  }
  return nullptr;
}

std::optional<std::string> ExperimentConfig::get(const std::string& section,
                                                 const std::string& key) const {
  const Section* s = find_section(section);
  if (s == nullptr) return std::nullopt;
  for (const auto& [k, v] : s->entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string ExperimentConfig::require(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v.has_value()) {
    throw ConfigError("missing required key " + section + "." + key);
  }
  return *v;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  Section* current = nullptr;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name != "sweep" && schema().find(name) == schema().end()) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + name + "]");
      }
      if (cfg.find_section(name) != nullptr) {
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + name +
                          "]");
      }
      cfg.sections_.push_back({name, {}});
      current = &cfg.sections_.back();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (current == nullptr) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (current->name == "sweep") {
      // Sweep keys are dotted paths into the rest of the schema.
      const auto dot = key.find('.');
      if (dot == std::string::npos) {
        throw ConfigError("sweep axis '" + key + "' must be a section.key path");
      }
      const std::string sec = key.substr(0, dot);
      const std::string sub = key.substr(dot + 1);
      const auto it = schema().find(sec);
      if (it == schema().end() || it->second.find(sub) == it->second.end()) {
        throw ConfigError("sweep axis '" + key + "' names an unknown config key");
      }
    } else {
      const auto& allowed = schema().at(current->name);
      if (allowed.find(key) == allowed.end()) {
        throw ConfigError("unknown key '" + key + "' in section [" + current->name + "]");
      }
    }
    for (const auto& [k, v] : current->entries) {
      if (k == key) {
        throw ConfigError("duplicate key '" + key + "' in section [" + current->name + "]");
      }
    }
    current->entries.emplace_back(key, value);
  }
  // Presence of the load-bearing sections is checked here; per-kind keys are
  // checked by the typed builders.
  for (const char* required : {"problem", "params", "theta", "run", "step"}) {
    if (cfg.find_section(required) == nullptr) {
      throw ConfigError(std::string("missing required section [") + required + "]");
    }
  }
  return cfg;
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& section : sections_) {
    out += "[" + section.name + "]\n";
    for (const auto& [k, v] : section.entries) {
      out += k + " = " + v + "\n";
    }
    out += "\n";
  }
  return out;
}

void ExperimentConfig::set_value(const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("set_value: '" + dotted_key + "' must be a section.key path");
  }
  const std::string sec = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  const auto it = schema().find(sec);
  if (it == schema().end() || it->second.find(key) == it->second.end()) {
    throw ConfigError("set_value: unknown config key '" + dotted_key + "'");
  }
  for (auto& section : sections_) {
    if (section.name != sec) continue;
    for (auto& entry : section.entries) {
      if (entry.first == key) {
        entry.second = value;
        return;
      }
    }
    section.entries.emplace_back(key, value);
    return;
  }
  sections_.push_back({sec, {{key, value}}});
}

ProblemSpec ExperimentConfig::build_problem() const {
  const std::string kind = require("problem", "kind");
  ProblemSpec problem;
  if (kind == "quad_quad") {
    problem = problem_quad_quad(parse_double("problem", "a", require("problem", "a")),
                                parse_vector("problem", "p", require("problem", "p")),
                                parse_double("problem", "b", require("problem", "b")),
                                parse_vector("problem", "q", require("problem", "q")));
  } else if (kind == "quad_l1") {
    problem = problem_quad_l1(parse_double("problem", "a", require("problem", "a")),
                              parse_vector("problem", "p", require("problem", "p")),
                              parse_double("problem", "w", require("problem", "w")));
  } else if (kind == "affine") {
    problem = problem_affine(parse_matrix("problem", "mA", require("problem", "mA")),
                             parse_vector("problem", "cA", require("problem", "cA")),
                             parse_matrix("problem", "mB", require("problem", "mB")),
                             parse_vector("problem", "cB", require("problem", "cB")));
  } else {
    throw ConfigError("problem.kind: unknown kind '" + kind + "'");
  }
  if (auto label = get("problem", "label"); label.has_value()) {
    problem.label = *label;
  }
  return problem;
}

DRParams ExperimentConfig::build_params() const {
  const std::string mode = get("params", "mode").value_or("explicit");
  const double alpha = parse_double("params", "alpha", require("params", "alpha"));
  const double beta = parse_double("params", "beta", require("params", "beta"));
  const double gamma = parse_double("params", "gamma", require("params", "gamma"));
  const double mu = parse_double("params", "mu", require("params", "mu"));
  const double epsilon =
      get("params", "epsilon").has_value()
          ? parse_double("params", "epsilon", *get("params", "epsilon"))
          : 0.0;
  DRParams params;
  if (mode == "c2") {
    params = c2_params(alpha, beta, gamma, mu, epsilon);
  } else if (mode == "explicit") {
    params.alpha = alpha;
    params.beta = beta;
    params.gamma = gamma;
    params.mu = mu;
    params.epsilon = epsilon;
    params.delta = parse_double("params", "delta", require("params", "delta"));
    params.lam = parse_double("params", "lambda", require("params", "lambda"));
  } else {
    throw ConfigError("params.mode: expected 'explicit' or 'c2', got '" + mode + "'");
  }
  const ProblemSpec problem = build_problem();
  if (std::abs(problem.alpha - params.alpha) > 1e-12 ||
      std::abs(problem.beta - params.beta) > 1e-12) {
    throw ConfigError("params.alpha/beta (" + std::to_string(params.alpha) + ", " +
                      std::to_string(params.beta) + ") do not match the problem moduli (" +
                      std::to_string(problem.alpha) + ", " + std::to_string(problem.beta) + ")");
  }
  return params;
}

ThetaSchedule ExperimentConfig::build_theta() const {
  const std::string kind = require("theta", "kind");
  const double t0 = parse_double("run", "t0", require("run", "t0"));
  try {
    if (kind == "constant") {
      return ThetaSchedule::constant(parse_double("theta", "value", require("theta", "value")),
                                     t0);
    }
    if (kind == "power") {
      return ThetaSchedule::power(parse_double("theta", "m", require("theta", "m")), t0);
    }
    if (kind == "reciprocal") {
      return ThetaSchedule::reciprocal(t0);
    }
  } catch (const InvalidParameterError& err) {
    throw ConfigError(std::string("theta: ") + err.what());
  }
  throw ConfigError("theta.kind: unknown kind '" + kind + "'");
}

PerturbationSchedule ExperimentConfig::build_perturbation() const {
  const Section* section = find_section("perturbation");
  const std::string kind =
      section == nullptr ? "zero" : get("perturbation", "kind").value_or("zero");
  if (kind == "zero") return PerturbationSchedule::zero();
  if (kind == "power_decay") {
    const double t0 = parse_double("run", "t0", require("run", "t0"));
    const double p = parse_double("perturbation", "p", require("perturbation", "p"));
    const double c = get("perturbation", "c").has_value()
                         ? parse_double("perturbation", "c", *get("perturbation", "c"))
                         : 0.0;
    try {
      return PerturbationSchedule::power_decay(
          p, c, parse_vector("perturbation", "direction", require("perturbation", "direction")),
          t0);
    } catch (const InvalidParameterError& err) {
      throw ConfigError(std::string("perturbation: ") + err.what());
    }
  }
  throw ConfigError("perturbation.kind: unknown kind '" + kind + "'");
}

StepPolicy ExperimentConfig::build_step() const {
  const std::string kind = require("step", "kind");
  try {
    if (kind == "fixed") {
      return StepPolicy::fixed_dt(parse_double("step", "dt", require("step", "dt")));
    }
    if (kind == "capped") {
      return StepPolicy::capped_eps(
          parse_double("step", "eps_cap", require("step", "eps_cap")));
    }
  } catch (const InvalidParameterError& err) {
    throw ConfigError(std::string("step: ") + err.what());
  }
  throw ConfigError("step.kind: unknown kind '" + kind + "'");
}

RunSettings ExperimentConfig::run_settings() const {
  RunSettings settings;
  settings.t0 = parse_double("run", "t0", require("run", "t0"));
  settings.t_end = parse_double("run", "t_end", require("run", "t_end"));
  if (!(settings.t_end > settings.t0)) {
    throw ConfigError("run.t_end must exceed run.t0");
  }
  settings.seed = get("run", "seed").has_value() ? parse_uint("run", "seed", *get("run", "seed"))
                                                 : 0;
  settings.u0 = parse_vector("run", "u0", require("run", "u0"));
  const std::string case_raw = get("run", "case").value_or("auto");
  if (case_raw == "auto") {
    settings.case_select = CaseSelect::Auto;
  } else if (case_raw == "C1" || case_raw == "c1") {
    settings.case_select = CaseSelect::C1;
  } else if (case_raw == "C2" || case_raw == "c2") {
    settings.case_select = CaseSelect::C2;
  } else if (case_raw == "C3" || case_raw == "c3") {
    settings.case_select = CaseSelect::C3;
  } else {
    throw ConfigError("run.case: expected C1, C2, C3 or auto, got '" + case_raw + "'");
  }
  return settings;
}

OutputPaths ExperimentConfig::output_paths() const {
  OutputPaths paths;
  if (auto v = get("output", "trajectory_csv")) paths.trajectory_csv = *v;
  if (auto v = get("output", "rate_json")) paths.rate_json = *v;
  if (auto v = get("output", "validation_json")) paths.validation_json = *v;
  if (auto v = get("output", "sweep_csv")) paths.sweep_csv = *v;
  return paths;
}

std::vector<SweepAxis> ExperimentConfig::sweep_axes() const {
  std::vector<SweepAxis> axes;
  const Section* section = find_section("sweep");
  if (section == nullptr) return axes;
  for (const auto& [key, value] : section->entries) {
    SweepAxis axis;
    axis.key = key;
    for (const auto& part : split(value, ',')) {
      axis.values.push_back(trim(part));
    }
    if (axis.values.empty()) {
      throw ConfigError("sweep axis '" + key + "' has no values");
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

double ExperimentConfig::rate_window_fraction() const {
  const double fraction =
      get("rate", "window_fraction").has_value()
          ? parse_double("rate", "window_fraction", *get("rate", "window_fraction"))
          : 0.5;
  if (!(fraction > 0.0) || !(fraction <= 1.0)) {
    throw ConfigError("rate.window_fraction must lie in (0, 1]");
  }
  return fraction;
}

std::vector<std::string> ExperimentConfig::warnings() const {
  std::vector<std::string> out;
  const Section* section = find_section("perturbation");
  if (section != nullptr && get("perturbation", "kind").value_or("zero") == "power_decay") {
    const double p = parse_double("perturbation", "p", require("perturbation", "p"));
    const double c = get("perturbation", "c").has_value()
                         ? parse_double("perturbation", "c", *get("perturbation", "c"))
                         : 0.0;
    if (!(c > 0.0) && !(p > 1.0)) {
      out.push_back("perturbation t^-" + std::to_string(p) +
                    " is not L1 on the horizon; the standing integrability assumption fails and "
                    "convergence is not guaranteed");
    }
  }
  return out;
}

}  // namespace adrflow
