#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "adrflow/experiment.hpp"

namespace {

int load_and_dispatch(const std::string& config_path, const adrflow::CliOptions& opts,
                      int (*command)(const adrflow::ExperimentConfig&,
                                     const adrflow::CliOptions&)) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot open '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  try {
    const adrflow::ExperimentConfig cfg = adrflow::ExperimentConfig::parse(buffer.str());
    for (const auto& warning : cfg.warnings()) {
      std::cerr << "warning: " << warning << "\n";
    }
    return command(cfg, opts);
  } catch (const adrflow::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const adrflow::FitError& err) {
    std::cerr << "fit error: " << err.what() << "\n";
    return 4;
  } catch (const adrflow::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment runner for relaxed two-operator splitting dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  adrflow::CliOptions opts;
  std::string out_dir;
  std::string traj_path;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Path to the experiment config")->required();
    cmd->add_option("--out", out_dir, "Directory for output files");
    cmd->add_flag("--force", opts.force, "Run even when parameter validation fails");
    cmd->add_option("--seed", seed, "Override the config seed");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check the parameter regime");
  add_common(validate);
  CLI::App* run = app.add_subcommand("run", "Integrate the trajectory and write CSV");
  add_common(run);
  CLI::App* rate = app.add_subcommand("rate", "Fit decay rates from a trajectory CSV");
  add_common(rate);
  rate->add_option("--traj", traj_path, "Trajectory CSV (defaults to the config output path)");
  CLI::App* sweep = app.add_subcommand("sweep", "Run the Cartesian product of the sweep axes");
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (!traj_path.empty()) opts.traj_path = traj_path;
  for (const auto* cmd : {validate, run, rate, sweep}) {
    if (cmd->parsed() && cmd->count("--seed") > 0) opts.seed = seed;
  }

  if (validate->parsed()) return load_and_dispatch(config_path, opts, adrflow::cmd_validate);
  if (run->parsed()) return load_and_dispatch(config_path, opts, adrflow::cmd_run);
  if (rate->parsed()) return load_and_dispatch(config_path, opts, adrflow::cmd_rate);
  return load_and_dispatch(config_path, opts, adrflow::cmd_sweep);
}
