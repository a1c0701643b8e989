#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "projgrad/oracles.hpp"
#include "projgrad/rng.hpp"
#include "projgrad/sets.hpp"
#include "projgrad/trace.hpp"

namespace projgrad {

// Mini-batch size rule for SPG.
struct BatchSchedule {
  enum class Kind { theorem_rule, constant, explicit_list };
  Kind kind = Kind::constant;
  // theorem_rule parameters
  double L = 0.0, l = 0.0, sigma2 = 0.0, D = 0.0;
  long b = 1;               // constant
  std::vector<long> list;   // explicit, one entry per step

  static BatchSchedule theorem_rule_schedule(double L, double l, double sigma2,
                                             double D);
  static BatchSchedule constant_schedule(long b);
  static BatchSchedule explicit_schedule(std::vector<long> list);

  long batch_at(long t, long k) const;
};

// b_t = max{1, min{ceil(3 t sigma2 / (4 L l D^2)),
//                  ceil(3 t k sigma2 / (4 L^2 D^2))}}.
// With l = 0 the first ceiling is treated as +infinity (the branch drops).
long spg_batch_theorem3(long t, long k, double L, double l, double sigma2,
                        double D);

// Output weights W(t) = (3t-2)/(8 gamma) - t L / (4 gamma^2) for t = 2..k;
// requires gamma > L (all weights positive). Entry i corresponds to t = i+2,
// i.e. to candidate x_{i+1}.
std::vector<double> spg_output_weights(int k, double gamma, double L);

// O(1)-memory weighted random choice over a stream of candidates: after
// offering candidates with weights w_1..w_m, candidate i is selected with
// probability w_i / sum(w). Stores only the current selection.
class ReservoirSelector {
 public:
  void offer(double weight, int index, const Eigen::VectorXd& point,
             double gamma, RngStream& stream);
  bool has_selection() const { return index_ >= 0; }
  int index() const { return index_; }
  const Eigen::VectorXd& point() const { return point_; }
  double gamma() const { return gamma_; }
  double total_weight() const { return total_; }

 private:
  double total_ = 0.0;
  int index_ = -1;
  Eigen::VectorXd point_;
  double gamma_ = 0.0;
};

struct SPGConfig {
  double gamma = 0.0;  // constant stepsize parameter, must exceed L
  double L = 0.0;      // global smoothness bound (output weights need it)
  int k = 2;
  BatchSchedule batch;
  bool keep_iterates = false;
};

// Stochastic projected gradient with mini-batches. The random output over
// {x_1, ..., x_{k-1}} follows the W(t) mass function; the trace carries the
// selected iterate, its index, and cumulative sample counts.
Trace run_spg(const StochOracle& oracle, const FeasibleSet& set,
              const Eigen::VectorXd& x0, const SPGConfig& config,
              RngStream& stream);

struct GradBatchRule {
  enum class Kind { adaptive, constant };
  Kind kind = Kind::constant;
  double alpha = 1.0;  // adaptive: b_t = max{1, ceil((3t-1) alpha / (2 gamma_t))}
  long b = 1;          // constant

  static GradBatchRule adaptive_rule(double alpha);
  static GradBatchRule constant_rule(long b);
};

struct ACSPGConfig {
  double L_bar_0 = 1.0;           // initial smoothness estimate, > 0
  double gamma_multiplier = 2.0;  // gamma_t = multiplier * running max
  int k = 2;
  GradBatchRule grad_batch;
  long curvature_batch = 1;  // b'_t >= 1
  bool keep_iterates = false;
};

// Auto-conditioned SPG: each iteration draws a gradient batch for the prox
// step with gamma_t = multiplier * max{Lbar_0, ..., Lbar_{t-1}}, then an
// independent curvature batch whose shared-sample means feed the local
// smoothness estimator Lbar_t. Output selected inductively with weights
// (t-1)/gamma_t over {x_1, ..., x_{k-1}}.
Trace run_acspg(const StochOracle& oracle, const FeasibleSet& set,
                const Eigen::VectorXd& x0, const ACSPGConfig& config,
                RngStream& stream);

struct TwoPhaseConfig {
  int R = 1;   // independent optimization-phase runs
  long K = 1;  // post-optimization sample size per candidate
  ACSPGConfig inner;
  // Optional per-run iteration counts; empty means inner.k for every run.
  std::vector<int> k_per_run;
};

struct TwoPhaseCandidate {
  int run = 0;
  Eigen::VectorXd point;
  double gamma = 0.0;         // stepsize attached to the candidate's mapping
  double est_pg_norm = 0.0;   // post-phase estimated mapping norm
  std::int64_t samples = 0;   // optimization-phase samples for this run
  Trace trace;                // full trace of the run
};

struct TwoPhaseReport {
  std::vector<TwoPhaseCandidate> candidates;
  int selected_run = 0;
  std::int64_t total_samples = 0;  // optimization phase + R*K post samples
};

// Two-phase method: R independent auto-conditioned runs produce candidates;
// the post-optimization phase re-estimates each candidate's projected
// gradient with K fresh samples and returns the smallest-norm candidate
// (ties: smallest run index).
std::pair<Eigen::VectorXd, TwoPhaseReport> run_two_phase(
    const StochOracle& oracle, const FeasibleSet& set,
    const Eigen::VectorXd& x0, const TwoPhaseConfig& config, RngStream& stream);

}  // namespace projgrad
