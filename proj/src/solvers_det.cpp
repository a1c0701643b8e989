#include "projgrad/solvers_det.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "projgrad/prox.hpp"

namespace projgrad {

namespace {

void check_gradient(const Eigen::VectorXd& g) {
  if (!g.allFinite()) throw std::runtime_error("solver: non-finite gradient");
}

std::string echo(const char* fmt, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

}  // namespace

Trace run_pg(const DetOracle& oracle, const FeasibleSet& set,
             const Eigen::VectorXd& x0, const PGConfig& config) {
  if (!(config.gamma > 0.0))
    throw std::invalid_argument("run_pg: gamma must be positive");
  if (config.k < 1) throw std::invalid_argument("run_pg: k must be >= 1");

  Trace trace;
  trace.config_echo = echo("pg gamma=%.17g k=%.17g", config.gamma,
                           static_cast<double>(config.k));
  Eigen::VectorXd x = project(set, x0);
  trace.f_initial = oracle.value(x);
  if (config.keep_iterates) trace.iterates.push_back(x);

  const double gamma = config.gamma;
  std::int64_t calls = 0;
  for (int t = 1; t <= config.k; ++t) {
    const Eigen::VectorXd g = oracle.gradient(x);
    check_gradient(g);
    ++calls;
    const Eigen::VectorXd x_next = prox_step(set, x, g, gamma);
    const double pg_norm = gamma * (x - x_next).norm();

    IterRecord rec;
    rec.t = t;
    rec.f_value = oracle.value(x_next);
    rec.pg_norm = pg_norm;
    rec.gamma = gamma;
    rec.oracle_calls_cum = calls;
    trace.records.push_back(std::move(rec));

    x = x_next;
    if (config.keep_iterates) trace.iterates.push_back(x);
    if (config.early_stop_tol > 0.0 && pg_norm <= config.early_stop_tol) break;
  }

  trace.final_point = x;
  trace.final_gamma = gamma;
  {
    const Eigen::VectorXd g = oracle.gradient(x);
    check_gradient(g);
    trace.final_pg_norm = projected_gradient(set, x, g, gamma).value.norm();
  }
  trace.oracle_calls_total = calls;
  return trace;
}

Trace run_acpg(const DetOracle& oracle, const FeasibleSet& set,
               const Eigen::VectorXd& x0, const ACPGConfig& config) {
  if (!(config.L0 > 0.0))
    throw std::invalid_argument("run_acpg: L0 must be positive");
  if (config.k < 1) throw std::invalid_argument("run_acpg: k must be >= 1");

  Trace trace;
  trace.config_echo = echo("acpg L0=%.17g k=%.17g", config.L0,
                           static_cast<double>(config.k));
  Eigen::VectorXd x = project(set, x0);
  double f_x = oracle.value(x);
  trace.f_initial = f_x;
  if (config.keep_iterates) trace.iterates.push_back(x);

  double running_max = config.L0;  // hat L_{t-1}
  std::int64_t calls = 0;
  for (int t = 1; t <= config.k; ++t) {
    const double gamma = running_max;
    const Eigen::VectorXd g = oracle.gradient(x);
    check_gradient(g);
    ++calls;
    const Eigen::VectorXd x_next = prox_step(set, x, g, gamma);
    const double f_next = oracle.value(x_next);
    const double L_t = local_curvature(f_x, f_next, g, x, x_next);
    const double pg_norm = gamma * (x - x_next).norm();

    IterRecord rec;
    rec.t = t;
    rec.f_value = f_next;
    rec.pg_norm = pg_norm;
    rec.gamma = gamma;
    rec.curvature = L_t;
    rec.oracle_calls_cum = calls;
    trace.records.push_back(std::move(rec));

    if (config.reset_on_new_segment && t >= 2 && L_t > 1.5 * running_max) {
      running_max = config.L0;
    } else {
      running_max = std::max(running_max, L_t);
    }
    x = x_next;
    f_x = f_next;
    if (config.keep_iterates) trace.iterates.push_back(x);
    if (config.early_stop_tol > 0.0 && pg_norm <= config.early_stop_tol) break;
  }

  trace.final_point = x;
  trace.final_gamma = running_max;  // hat L_k, the rule's gamma_{k+1}
  {
    const Eigen::VectorXd g = oracle.gradient(x);
    check_gradient(g);
    trace.final_pg_norm =
        projected_gradient(set, x, g, running_max).value.norm();
  }
  trace.oracle_calls_total = calls;
  return trace;
}

double bootstrap_l0(const DetOracle& oracle, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
  const double curv =
      local_curvature(oracle.value(a), oracle.value(b), oracle.gradient(a), a, b);
  return std::max(std::abs(curv), 1e-12);
}

}  // namespace projgrad
