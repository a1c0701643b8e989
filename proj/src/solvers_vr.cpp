#include "projgrad/solvers_vr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "projgrad/prox.hpp"

namespace projgrad {

long vr_batch_size(long s, long u, long T) {
  if (s < 1 || T < 1) throw std::invalid_argument("vr_batch_size: bad indices");
  if (u < 2)
    throw std::invalid_argument("vr_batch_size: u must be >= 2 (u=1 anchors)");
  if (s == 1) return (T * T + (u - 2)) / (u - 1);  // ceil(T^2 / (u-1))
  return (13 * T + 1) / 2;                         // ceil(13 T / 2)
}

Eigen::VectorXd spider_update(const Eigen::VectorXd& g_prev,
                              const SpiderStats& batch) {
  return batch.mean_diff + g_prev;
}

Eigen::VectorXd spider_update(const StochOracle& oracle,
                              const Eigen::VectorXd& g_prev,
                              const Eigen::VectorXd& x_prev2,
                              const Eigen::VectorXd& x_prev1, long b,
                              RngStream& stream) {
  return spider_update(g_prev, oracle.spider_batch(x_prev2, x_prev1, b, stream));
}

double pairwise_curvature(const SpiderStats& batch,
                          const Eigen::VectorXd& x_prev2,
                          const Eigen::VectorXd& x_prev1) {
  const double dist_sq = (x_prev1 - x_prev2).squaredNorm();
  if (dist_sq < 1e-30) return 0.0;
  return std::sqrt(batch.sum_sq_diff /
                   (static_cast<double>(batch.batch) * dist_sq));
}

namespace {

std::string format_echo(const char* fmt, double a, double b, double c,
                        double d) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

bool is_anchor(int t, int T) { return (t - 1) % T == 0; }

}  // namespace

Trace run_vrspg(const StochOracle& oracle, const FeasibleSet& set,
                const Eigen::VectorXd& x0, const VRConfig& config,
                RngStream& stream) {
  if (!(config.gamma > 0.0))
    throw std::invalid_argument("run_vrspg: gamma must be positive");
  if (config.T < 1) throw std::invalid_argument("run_vrspg: T must be >= 1");
  if (config.N < 1) throw std::invalid_argument("run_vrspg: N must be >= 1");
  if (config.k < config.T)
    throw std::invalid_argument("run_vrspg: requires k >= T");

  Trace trace;
  trace.config_echo =
      format_echo("vrspg gamma=%.17g T=%.17g N=%.17g k=%.17g", config.gamma,
                  static_cast<double>(config.T), static_cast<double>(config.N),
                  static_cast<double>(config.k));
  Eigen::VectorXd x = project(set, x0);
  Eigen::VectorXd x_prev = x;  // x_{t-2} during step t
  Eigen::VectorXd estimate;    // tilde G_t
  if (config.keep_iterates) trace.iterates.push_back(x);

  const double gamma = config.gamma;
  ReservoirSelector selector;
  std::int64_t calls = 0;
  for (int t = 1; t <= config.k; ++t) {
    selector.offer(static_cast<double>(t), t - 1, x, gamma, stream);
    if (is_anchor(t, config.T)) {
      estimate = oracle.batch_grad(x, config.N, stream);
      calls += config.N;
    } else {
      const long s = (t - 1) / config.T + 1;
      const long u = (t - 1) % config.T + 1;
      const long b = config.inner_batch > 0 ? config.inner_batch
                                            : vr_batch_size(s, u, config.T);
      const SpiderStats batch = oracle.spider_batch(x_prev, x, b, stream);
      estimate = spider_update(estimate, batch);
      calls += b;
    }
    require_finite(estimate, "run_vrspg estimator");
    const Eigen::VectorXd x_next = prox_step(set, x, estimate, gamma);

    IterRecord rec;
    rec.t = t;
    rec.pg_norm = gamma * (x - x_next).norm();
    rec.gamma = gamma;
    rec.oracle_calls_cum = calls;
    trace.records.push_back(std::move(rec));

    x_prev = x;
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

Trace run_acvrspg(const StochOracle& oracle, const FeasibleSet& set,
                  const Eigen::VectorXd& x0, const ACVRConfig& config,
                  RngStream& stream) {
  if (!(config.L_bar_0 > 0.0))
    throw std::invalid_argument("run_acvrspg: L_bar_0 must be positive");
  if (!(config.gamma_multiplier > 0.0))
    throw std::invalid_argument("run_acvrspg: gamma multiplier must be positive");
  if (config.T < 1) throw std::invalid_argument("run_acvrspg: T must be >= 1");
  if (config.N < 1) throw std::invalid_argument("run_acvrspg: N must be >= 1");
  if (config.k < 1) throw std::invalid_argument("run_acvrspg: k must be >= 1");
  if (config.curvature_batch < 1)
    throw std::invalid_argument("run_acvrspg: curvature batch must be >= 1");
  const long inner_b = config.inner_batch > 0 ? config.inner_batch
                                              : static_cast<long>(config.T);

  Trace trace;
  trace.config_echo = format_echo(
      "acvrspg L_bar_0=%.17g mult=%.17g T=%.17g k=%.17g", config.L_bar_0,
      config.gamma_multiplier, static_cast<double>(config.T),
      static_cast<double>(config.k));
  Eigen::VectorXd x = project(set, x0);
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd estimate;
  if (config.keep_iterates) trace.iterates.push_back(x);

  double hat_prev = config.L_bar_0;   // hat cL_{t-2}
  double bar_prev = config.L_bar_0;   // bar cL_{t-1}
  ReservoirSelector selector;
  std::int64_t calls = 0;
  for (int t = 1; t <= config.k; ++t) {
    double hat;  // hat cL_{t-1}
    if (is_anchor(t, config.T)) {
      estimate = oracle.batch_grad(x, config.N, stream);
      calls += config.N;
      hat = std::max(hat_prev, bar_prev);
    } else {
      const SpiderStats batch = oracle.spider_batch(x_prev, x, inner_b, stream);
      estimate = spider_update(estimate, batch);
      calls += inner_b;
      const double tilde = pairwise_curvature(batch, x_prev, x);
      hat = std::max(hat_prev, std::max(bar_prev, tilde));
    }
    require_finite(estimate, "run_acvrspg estimator");
    const double gamma = config.gamma_multiplier * hat;
    selector.offer(1.0 / gamma, t - 1, x, gamma, stream);
    const Eigen::VectorXd x_next = prox_step(set, x, estimate, gamma);

    const CurvatureStats cs =
        oracle.curvature_pair(x, x_next, config.curvature_batch, stream);
    const double bar_t =
        local_curvature(cs.f_prev, cs.f_cur, cs.g_prev, x, x_next);
    calls += config.curvature_batch;

    IterRecord rec;
    rec.t = t;
    rec.pg_norm = gamma * (x - x_next).norm();
    rec.gamma = gamma;
    rec.curvature = bar_t;
    rec.oracle_calls_cum = calls;
    trace.records.push_back(std::move(rec));

    hat_prev = hat;
    bar_prev = bar_t;
    x_prev = x;
    x = x_next;
    if (config.keep_iterates) trace.iterates.push_back(x);
  }

  trace.final_point = x;
  trace.final_gamma = config.gamma_multiplier * std::max(hat_prev, bar_prev);
  trace.output_index = selector.index();
  trace.output_point = selector.point();
  trace.output_gamma = selector.gamma();
  trace.oracle_calls_total = calls;
  return trace;
}

}  // namespace projgrad
