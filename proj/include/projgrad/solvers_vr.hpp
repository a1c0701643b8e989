#pragma once

#include <Eigen/Core>

#include "projgrad/oracles.hpp"
#include "projgrad/rng.hpp"
#include "projgrad/sets.hpp"
#include "projgrad/solvers_stoch.hpp"
#include "projgrad/trace.hpp"

namespace projgrad {

// Within-epoch inner batch size: ceil(T^2/(u-1)) in the first epoch,
// ceil(13T/2) afterwards. u >= 2 (u = 1 is the anchor step, which uses N).
long vr_batch_size(long s, long u, long T);

// Recursive estimator update: mean over the shared batch of
// G(x_{t-1}, xi) - G(x_{t-2}, xi), added to the previous estimate.
Eigen::VectorXd spider_update(const Eigen::VectorXd& g_prev,
                              const SpiderStats& batch);
// Convenience: draws its own batch.
Eigen::VectorXd spider_update(const StochOracle& oracle,
                              const Eigen::VectorXd& g_prev,
                              const Eigen::VectorXd& x_prev2,
                              const Eigen::VectorXd& x_prev1, long b,
                              RngStream& stream);

// Root-mean-square difference quotient over the shared batch:
//   sqrt( sum_i ||G(x_{t-1}, xi_i) - G(x_{t-2}, xi_i)||^2
//         / (b ||x_{t-1} - x_{t-2}||^2) ).
// Reuses the batch that fed spider_update; 0 for zero displacement.
double pairwise_curvature(const SpiderStats& batch,
                          const Eigen::VectorXd& x_prev2,
                          const Eigen::VectorXd& x_prev1);

struct VRConfig {
  double gamma = 0.0;  // constant stepsize parameter
  int T = 1;           // epoch length
  long N = 1;          // anchor batch size
  int k = 1;           // iterations; requires k >= T
  // Inner batch sizes follow the epoch rule above by default; a positive
  // constant overrides it.
  long inner_batch = 0;
  bool keep_iterates = false;
};

// Variance-reduced SPG: a fresh N-sample estimator every T steps, recursive
// updates in between, and a random output over {x_0, ..., x_{k-1}} with mass
// proportional to t for x_{t-1}.
Trace run_vrspg(const StochOracle& oracle, const FeasibleSet& set,
                const Eigen::VectorXd& x0, const VRConfig& config,
                RngStream& stream);

struct ACVRConfig {
  double L_bar_0 = 1.0;           // initial smoothness estimate, > 0
  double gamma_multiplier = 4.0;  // gamma_t = multiplier * running estimate
  int T = 1;
  long N = 1;
  int k = 1;
  long inner_batch = 0;      // defaults to T when nonpositive
  long curvature_batch = 1;  // b'_t >= 1
  bool keep_iterates = false;
};

// Auto-conditioned variance-reduced SPG: anchor steps fold only the
// shared-batch estimator Lbar into the running max; inner steps also fold in
// the pairwise estimator computed from the recursion batch. Output selected
// with weights 1/gamma_t over {x_0, ..., x_{k-1}}.
Trace run_acvrspg(const StochOracle& oracle, const FeasibleSet& set,
                  const Eigen::VectorXd& x0, const ACVRConfig& config,
                  RngStream& stream);

}  // namespace projgrad
