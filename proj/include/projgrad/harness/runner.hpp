#pragma once

#include <optional>
#include <string>
#include <vector>

#include "projgrad/harness/config.hpp"

namespace projgrad {

struct RunOptions {
  int jobs = 1;  // concurrent trials
  // Overrides applied before running (CLI flags).
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> output_dir;
};

struct RunResult {
  std::string output_dir;
  bool ok = true;
  std::vector<std::string> failures;  // "trial <i> solver <name>: message"
};

// Runs every solver over every trial (fresh problem instance per trial unless
// fixed_instance), writes trial_<solver>_<i>.csv per task, aggregates into
// curve_<solver>.csv, and writes a deterministic manifest. Solver failures
// are recorded without aborting sibling tasks.
RunResult run_experiment(const ExperimentConfig& config,
                         const RunOptions& options = {});

// Pointwise mean and sample standard deviation (n-1 denominator; zero for a
// single trial) over aligned trial CSVs.
struct AggregateCurve {
  std::vector<long> t;
  std::vector<double> samples_mean;
  // Optional metrics hold one entry per row; absent cells are empty.
  std::vector<std::optional<double>> f_mean, f_std;
  std::vector<std::optional<double>> pg_mean, pg_std;
  std::vector<double> gamma_mean, gamma_std;
  std::vector<std::optional<double>> curv_mean, curv_std;
};

AggregateCurve aggregate_trials(const std::vector<std::string>& trial_csvs);
void write_curve_csv(const AggregateCurve& curve, const std::string& path);
AggregateCurve read_curve_csv(const std::string& path);

// Renders curve_*.csv files in an experiment directory into SVG charts plus
// gnuplot data files (mapping norm vs iteration, vs samples, and stepsize
// estimates vs iteration).
void plot_directory(const std::string& dir);

}  // namespace projgrad
