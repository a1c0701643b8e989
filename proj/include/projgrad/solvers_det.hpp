#pragma once

#include <Eigen/Core>

#include "projgrad/oracles.hpp"
#include "projgrad/sets.hpp"
#include "projgrad/trace.hpp"

namespace projgrad {

struct PGConfig {
  double gamma = 1.0;  // constant stepsize parameter, > 0
  int k = 1;
  // When positive, stop as soon as the step mapping norm falls at or below
  // this tolerance; default runs the full iteration budget.
  double early_stop_tol = 0.0;
  bool keep_iterates = false;
};

// Projected gradient with a constant stepsize parameter:
//   x_t = argmin_{x in X} <grad f(x_{t-1}), x> + (gamma/2) ||x_{t-1} - x||^2.
// x0 is projected onto the set on entry if needed. The trace records
// ||g_{X,t-1}|| = gamma ||x_{t-1} - x_t|| per step plus the mapping at the
// final iterate.
Trace run_pg(const DetOracle& oracle, const FeasibleSet& set,
             const Eigen::VectorXd& x0, const PGConfig& config);

struct ACPGConfig {
  double L0 = 1.0;  // initial smoothness estimate, > 0
  int k = 1;
  // Restart the running-max estimate at L0 whenever a new segment forms
  // (a curvature jump above 1.5x the running max). Off by default.
  bool reset_on_new_segment = false;
  double early_stop_tol = 0.0;
  bool keep_iterates = false;
};

// Auto-conditioned projected gradient: gamma_t is the running max of the
// local curvature estimates max{L0, L_1, ..., L_{t-1}}, with
//   L_t = 2 (f(x_t) - f(x_{t-1}) - <grad f(x_{t-1}), x_t - x_{t-1}>)
//         / ||x_t - x_{t-1}||^2
// recorded after each step. Stepsize parameters are nondecreasing; function
// values may occasionally increase.
Trace run_acpg(const DetOracle& oracle, const FeasibleSet& set,
               const Eigen::VectorXd& x0, const ACPGConfig& config);

// Bootstrap an initial estimate from two points: the absolute local
// curvature between them, floored away from zero.
double bootstrap_l0(const DetOracle& oracle, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b);

}  // namespace projgrad
