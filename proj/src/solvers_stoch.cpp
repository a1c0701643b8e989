#include "projgrad/solvers_stoch.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "projgrad/prox.hpp"

namespace projgrad {

BatchSchedule BatchSchedule::theorem_rule_schedule(double L, double l,
                                                   double sigma2, double D) {
  BatchSchedule s;
  s.kind = Kind::theorem_rule;
  s.L = L;
  s.l = l;
  s.sigma2 = sigma2;
  s.D = D;
  return s;
}

BatchSchedule BatchSchedule::constant_schedule(long b) {
  if (b < 1) throw std::invalid_argument("BatchSchedule: b must be >= 1");
  BatchSchedule s;
  s.kind = Kind::constant;
  s.b = b;
  return s;
}

BatchSchedule BatchSchedule::explicit_schedule(std::vector<long> list) {
  for (long b : list)
    if (b < 1)
      throw std::invalid_argument("BatchSchedule: batch sizes must be >= 1");
  BatchSchedule s;
  s.kind = Kind::explicit_list;
  s.list = std::move(list);
  return s;
}

long BatchSchedule::batch_at(long t, long k) const {
  switch (kind) {
    case Kind::theorem_rule:
      return spg_batch_theorem3(t, k, L, l, sigma2, D);
    case Kind::constant:
      return b;
    case Kind::explicit_list:
      if (t < 1 || static_cast<std::size_t>(t) > list.size())
        throw std::invalid_argument("BatchSchedule: explicit list too short");
      return list[static_cast<std::size_t>(t - 1)];
  }
  throw std::logic_error("BatchSchedule: unknown kind");
}

long spg_batch_theorem3(long t, long k, double L, double l, double sigma2,
                        double D) {
  if (!(L > 0.0) || !(D > 0.0))
    throw std::invalid_argument("spg_batch_theorem3: L and D must be positive");
  if (l < 0.0 || sigma2 < 0.0)
    throw std::invalid_argument("spg_batch_theorem3: l, sigma2 must be >= 0");
  if (sigma2 == 0.0) return 1;
  const double td = static_cast<double>(t);
  const double second =
      std::ceil(3.0 * td * static_cast<double>(k) * sigma2 / (4.0 * L * L * D * D));
  double candidate = second;
  if (l > 0.0) {
    const double first = std::ceil(3.0 * td * sigma2 / (4.0 * L * l * D * D));
    candidate = std::min(first, second);
  }
  return std::max<long>(1, static_cast<long>(candidate));
}

std::vector<double> spg_output_weights(int k, double gamma, double L) {
  if (k < 2) throw std::invalid_argument("spg_output_weights: k must be >= 2");
  if (!(gamma > L))
    throw std::invalid_argument("spg_output_weights: requires gamma > L");
  std::vector<double> w(static_cast<std::size_t>(k - 1));
  for (int t = 2; t <= k; ++t)
    w[static_cast<std::size_t>(t - 2)] =
        (3.0 * t - 2.0) / (8.0 * gamma) - t * L / (4.0 * gamma * gamma);
  return w;
}

void ReservoirSelector::offer(double weight, int index,
                              const Eigen::VectorXd& point, double gamma,
                              RngStream& stream) {
  if (weight < 0.0)
    throw std::invalid_argument("ReservoirSelector: negative weight");
  if (weight == 0.0) return;
  total_ += weight;
  if (stream.uniform01() < weight / total_) {
    index_ = index;
    point_ = point;
    gamma_ = gamma;
  }
}

GradBatchRule GradBatchRule::adaptive_rule(double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("GradBatchRule: alpha must be positive");
  GradBatchRule r;
  r.kind = Kind::adaptive;
  r.alpha = alpha;
  return r;
}

GradBatchRule GradBatchRule::constant_rule(long b) {
  if (b < 1) throw std::invalid_argument("GradBatchRule: b must be >= 1");
  GradBatchRule r;
  r.kind = Kind::constant;
  r.b = b;
  return r;
}

namespace {

std::string format_echo(const char* fmt, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

}  // namespace

Trace run_spg(const StochOracle& oracle, const FeasibleSet& set,
              const Eigen::VectorXd& x0, const SPGConfig& config,
              RngStream& stream) {
  if (config.k < 2) throw std::invalid_argument("run_spg: k must be >= 2");
  if (!(config.gamma > config.L))
    throw std::invalid_argument("run_spg: requires gamma > L");

  Trace trace;
  trace.config_echo = format_echo("spg gamma=%.17g L=%.17g k=%.17g",
                                  config.gamma, config.L,
                                  static_cast<double>(config.k));
  Eigen::VectorXd x = project(set, x0);
  if (config.keep_iterates) trace.iterates.push_back(x);

  const double gamma = config.gamma;
  ReservoirSelector selector;
  std::int64_t calls = 0;
  for (int t = 1; t <= config.k; ++t) {
    // Candidate x_{t-1} enters with weight W(t) before the step runs.
    if (t >= 2) {
      const double w = (3.0 * t - 2.0) / (8.0 * gamma) -
                       t * config.L / (4.0 * gamma * gamma);
      selector.offer(w, t - 1, x, gamma, stream);
    }
    const long b = config.batch.batch_at(t, config.k);
    if (b < 1) throw std::invalid_argument("run_spg: nonpositive batch");
    const Eigen::VectorXd g_hat = oracle.batch_grad(x, b, stream);
    require_finite(g_hat, "run_spg batch gradient");
    calls += b;
    const Eigen::VectorXd x_next = prox_step(set, x, g_hat, gamma);

    IterRecord rec;
    rec.t = t;
    rec.pg_norm = gamma * (x - x_next).norm();
    rec.gamma = gamma;
    rec.oracle_calls_cum = calls;
    trace.records.push_back(std::move(rec));

    x = x_next;
    if (config.keep_iterates) trace.iterates.push_back(x);
  }

  trace.final_point = x;
  trace.final_gamma = gamma;
  trace.output_index = selector.index();
  trace.output_point = selector.point();
  trace.output_gamma = selector.gamma();
  trace.oracle_calls_total = calls;
  return trace;
}

Trace run_acspg(const StochOracle& oracle, const FeasibleSet& set,
                const Eigen::VectorXd& x0, const ACSPGConfig& config,
                RngStream& stream) {
  if (config.k < 2) throw std::invalid_argument("run_acspg: k must be >= 2");
  if (!(config.L_bar_0 > 0.0))
    throw std::invalid_argument("run_acspg: L_bar_0 must be positive");
  if (!(config.gamma_multiplier > 0.0))
    throw std::invalid_argument("run_acspg: gamma multiplier must be positive");
  if (config.curvature_batch < 1)
    throw std::invalid_argument("run_acspg: curvature batch must be >= 1");

  Trace trace;
  trace.config_echo =
      format_echo("acspg L_bar_0=%.17g mult=%.17g k=%.17g", config.L_bar_0,
                  config.gamma_multiplier, static_cast<double>(config.k));
  Eigen::VectorXd x = project(set, x0);
  if (config.keep_iterates) trace.iterates.push_back(x);

  double running_max = config.L_bar_0;  // hat cL_{t-1}
  ReservoirSelector selector;
  std::int64_t calls = 0;
  for (int t = 1; t <= config.k; ++t) {
    const double gamma = config.gamma_multiplier * running_max;
    if (t >= 2) selector.offer((t - 1.0) / gamma, t - 1, x, gamma, stream);

    long b;
    if (config.grad_batch.kind == GradBatchRule::Kind::adaptive) {
      b = std::max<long>(
          1, static_cast<long>(
                 std::ceil((3.0 * t - 1.0) * config.grad_batch.alpha /
                           (2.0 * gamma))));
    } else {
      b = config.grad_batch.b;
    }
    const Eigen::VectorXd g_hat = oracle.batch_grad(x, b, stream);
    require_finite(g_hat, "run_acspg batch gradient");
    const Eigen::VectorXd x_next = prox_step(set, x, g_hat, gamma);

    const CurvatureStats cs =
        oracle.curvature_pair(x, x_next, config.curvature_batch, stream);
    const double L_bar_t =
        local_curvature(cs.f_prev, cs.f_cur, cs.g_prev, x, x_next);
    calls += b + config.curvature_batch;

    IterRecord rec;
    rec.t = t;
    rec.pg_norm = gamma * (x - x_next).norm();
    rec.gamma = gamma;
    rec.curvature = L_bar_t;
    rec.oracle_calls_cum = calls;
    trace.records.push_back(std::move(rec));

    running_max = std::max(running_max, L_bar_t);
    x = x_next;
    if (config.keep_iterates) trace.iterates.push_back(x);
  }

  trace.final_point = x;
  trace.final_gamma = config.gamma_multiplier * running_max;
  trace.output_index = selector.index();
  trace.output_point = selector.point();
  trace.output_gamma = selector.gamma();
  trace.oracle_calls_total = calls;
  return trace;
}

std::pair<Eigen::VectorXd, TwoPhaseReport> run_two_phase(
    const StochOracle& oracle, const FeasibleSet& set,
    const Eigen::VectorXd& x0, const TwoPhaseConfig& config,
    RngStream& stream) {
  if (config.R < 1) throw std::invalid_argument("run_two_phase: R must be >= 1");
  if (config.K < 1) throw std::invalid_argument("run_two_phase: K must be >= 1");
  if (!config.k_per_run.empty() &&
      config.k_per_run.size() != static_cast<std::size_t>(config.R))
    throw std::invalid_argument("run_two_phase: k_per_run size must equal R");

  TwoPhaseReport report;
  report.candidates.reserve(static_cast<std::size_t>(config.R));
  std::int64_t total = 0;
  for (int r = 0; r < config.R; ++r) {
    ACSPGConfig inner = config.inner;
    if (!config.k_per_run.empty())
      inner.k = config.k_per_run[static_cast<std::size_t>(r)];
    RngStream run_stream = stream.child("run-" + std::to_string(r));
    Trace trace = run_acspg(oracle, set, x0, inner, run_stream);

    TwoPhaseCandidate cand;
    cand.run = r;
    cand.point = trace.output_point;
    cand.gamma = trace.output_gamma;
    cand.samples = trace.oracle_calls_total;
    total += trace.oracle_calls_total;
    cand.trace = std::move(trace);
    report.candidates.push_back(std::move(cand));
  }

  for (auto& cand : report.candidates) {
    RngStream post_stream = stream.child("post-" + std::to_string(cand.run));
    const Eigen::VectorXd g_bar =
        oracle.batch_grad(cand.point, config.K, post_stream);
    cand.est_pg_norm =
        projected_gradient(set, cand.point, g_bar, cand.gamma).value.norm();
  }
  total += static_cast<std::int64_t>(config.R) * config.K;

  int best = 0;
  for (int r = 1; r < config.R; ++r) {
    if (report.candidates[static_cast<std::size_t>(r)].est_pg_norm <
        report.candidates[static_cast<std::size_t>(best)].est_pg_norm)
      best = r;
  }
  report.selected_run = best;
  report.total_samples = total;
  return {report.candidates[static_cast<std::size_t>(best)].point, report};
}

}  // namespace projgrad
