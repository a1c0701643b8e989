#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace projgrad {

// Telemetry for one solver step t (1-based). pg_norm is the norm of the
// mapping at the pre-step point x_{t-1}, evaluated with the gamma actually
// used for the step: gamma_t * ||x_{t-1} - x_t||. For stochastic solvers this
// is the mapping of the gradient estimate that drove the step; the exact
// mapping is a harness-side evaluation.
struct IterRecord {
  int t = 0;
  std::optional<double> f_value;  // f(x_t); filled when the solver knows it
  double pg_norm = 0.0;
  double gamma = 0.0;
  std::optional<double> curvature;  // local smoothness estimate for the step
  std::int64_t oracle_calls_cum = 0;
};

struct Trace {
  std::optional<double> f_initial;  // f(x_0) for deterministic solvers
  std::vector<IterRecord> records;  // one per executed iteration

  // x_0..x_k when the run was asked to keep iterates.
  std::vector<Eigen::VectorXd> iterates;

  Eigen::VectorXd final_point;  // x_k
  // Mapping at the final iterate, evaluated with the stepsize the algorithm's
  // own rule assigns to step k+1 (deterministic solvers only).
  std::optional<double> final_pg_norm;
  double final_gamma = 0.0;

  // Randomized-output solvers: the selected iterate, its index among
  // x_0..x_{k-1}, and the gamma its mapping is evaluated with.
  std::optional<int> output_index;
  Eigen::VectorXd output_point;
  double output_gamma = 0.0;

  std::int64_t oracle_calls_total = 0;
  std::string config_echo;
};

// Iterate index (x_t for the returned index t) achieving the minimum recorded
// pg_norm, ties broken by the smallest index, plus the value.
std::pair<int, double> best_iterate(const Trace& trace);

// Number of stepsize segments of an auto-conditioned run: 1 plus the number
// of steps t >= 2 whose curvature estimate jumped above 1.5x the running max
// (which equals the step's gamma). Requires curvature estimates on every
// record.
int segment_count(const Trace& trace);

}  // namespace projgrad
