// gradbench: config-driven benchmark runner for the projected gradient
// solver family. Subcommands: run, presets, plot, validate.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "projgrad/harness/config.hpp"
#include "projgrad/harness/presets.hpp"
#include "projgrad/harness/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTrialFailure = 1;
constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw projgrad::ConfigError(0, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark harness for projected gradient methods"};
  app.require_subcommand(1);

  std::string config_path, preset_name, plot_dir;
  std::uint64_t seed = 0;
  int trials = 0, jobs = 1;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override master seed");
  auto* trials_opt = run->add_option("--trials", trials, "override trial count");
  auto* out_opt = run->add_option("--out", out_dir, "override output directory");
  run->add_option("--jobs", jobs, "concurrent trials")->default_val(1);

  auto* presets = app.add_subcommand("presets", "list or emit built-in configs");
  auto* presets_list = presets->add_subcommand("list", "list preset names");
  auto* presets_emit = presets->add_subcommand("emit", "print a preset config");
  presets_emit->add_option("name", preset_name, "preset name")->required();
  presets->require_subcommand(1);

  auto* plot = app.add_subcommand("plot", "render curves from an experiment dir");
  plot->add_option("dir", plot_dir, "experiment output directory")->required();

  auto* validate = app.add_subcommand("validate", "parse and check a config");
  validate->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets_list->parsed()) {
      for (const auto& name : projgrad::preset_names())
        std::cout << name << "\n";
      return kExitOk;
    }
    if (presets_emit->parsed()) {
      if (!projgrad::has_preset(preset_name)) {
        std::cerr << "unknown preset `" << preset_name << "`\n";
        return kExitConfigError;
      }
      std::cout << projgrad::emit_preset(preset_name);
      return kExitOk;
    }
    if (validate->parsed()) {
      projgrad::parse_config(read_file(config_path));
      std::cout << "ok\n";
      return kExitOk;
    }
    if (plot->parsed()) {
      projgrad::plot_directory(plot_dir);
      return kExitOk;
    }
    if (run->parsed()) {
      const projgrad::ExperimentConfig cfg =
          projgrad::parse_config(read_file(config_path));
      projgrad::RunOptions opts;
      opts.jobs = jobs;
      if (seed_opt->count()) opts.seed = seed;
      if (trials_opt->count()) opts.trials = trials;
      if (out_opt->count()) opts.output_dir = out_dir;
      const projgrad::RunResult result = projgrad::run_experiment(cfg, opts);
      for (const auto& failure : result.failures)
        std::cerr << "FAILED: " << failure << "\n";
      std::cout << "wrote " << result.output_dir << "\n";
      return result.ok ? kExitOk : kExitTrialFailure;
    }
  } catch (const projgrad::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTrialFailure;
  }
  return kExitOk;
}
