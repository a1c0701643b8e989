#include "projgrad/harness/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "projgrad/harness/plot.hpp"
#include "projgrad/oracles.hpp"
#include "projgrad/problems/boxqp.hpp"
#include "projgrad/problems/svm.hpp"
#include "projgrad/prox.hpp"
#include "projgrad/rng.hpp"
#include "projgrad/solvers_det.hpp"
#include "projgrad/solvers_stoch.hpp"
#include "projgrad/solvers_vr.hpp"

namespace fs = std::filesystem;

namespace projgrad {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_stochastic_algo(const std::string& algo) {
  return algo != "pg" && algo != "acpg";
}

// One trial's problem instance plus the constants auto rules resolve against.
struct TrialContext {
  std::unique_ptr<BoxQP> qp;
  std::unique_ptr<BoxQPOracle> qp_oracle;
  std::shared_ptr<const SvmDataset> svm_data;
  std::unique_ptr<StochOracle> oracle;
  std::shared_ptr<const FeasibleSet> set_holder;
  const FeasibleSet* set = nullptr;
  double L = 0.0;
  long dataset_size = 0;  // 0 when online
  Eigen::VectorXd x0;
};

TrialContext build_trial_context(const ExperimentConfig& cfg, int trial) {
  TrialContext ctx;
  const int instance_trial = cfg.fixed_instance ? 0 : trial;
  RngStream gen(cfg.seed, static_cast<std::uint64_t>(instance_trial),
                "problem");
  if (cfg.problem.kind == ProblemSpec::Kind::qp) {
    const auto& q = cfg.problem.qp;
    ctx.qp = std::make_unique<BoxQP>(gen_boxqp(q.n, q.box_lower, q.box_upper, gen));
    ctx.qp_oracle = std::make_unique<BoxQPOracle>(*ctx.qp);
    ctx.set = &ctx.qp->box;
    ctx.L = ctx.qp->spectral_norm;
  } else {
    const auto& s = cfg.problem.svm;
    SvmParams params{s.lambda1, s.lambda2, s.lambda3};
    ctx.set_holder = svm_feasible_set(s.n);
    ctx.set = ctx.set_holder.get();
    ctx.L = svm_lipschitz(params);
    if (s.online) {
      ctx.oracle = std::make_unique<SvmOnlineOracle>(s.n, params, gen);
    } else {
      if (!s.dataset.empty()) {
        ctx.svm_data =
            std::make_shared<SvmDataset>(load_svm_dataset(s.dataset));
        if (ctx.svm_data->dim() != s.n)
          throw std::runtime_error("dataset dimension does not match problem.n");
      } else {
        ctx.svm_data =
            std::make_shared<SvmDataset>(gen_svm_dataset(s.samples, s.n, gen));
      }
      ctx.dataset_size = ctx.svm_data->size();
      ctx.oracle = std::make_unique<SvmFiniteSumOracle>(ctx.svm_data, params);
    }
  }
  RngStream x0_stream(cfg.seed, static_cast<std::uint64_t>(trial), "x0");
  ctx.x0 = ctx.set->sample_uniform(x0_stream);
  return ctx;
}

// Empirical per-sample gradient variance: max over probe points, with a
// 1.5x safety factor. Recorded as experiment metadata for batch schedules
// that need a sigma^2 input.
double estimate_sigma2(const StochOracle& oracle, const FeasibleSet& set,
                       RngStream& stream, int probes = 10,
                       long draws_per_probe = 100) {
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Eigen::VectorXd x = set.sample_uniform(stream);
    worst = std::max(worst, oracle.sample_variance(x, draws_per_probe, stream));
  }
  return 1.5 * worst;
}

long clamp_to_dataset(long b, const TrialContext& ctx) {
  if (ctx.dataset_size > 0 && b > ctx.dataset_size) return ctx.dataset_size;
  return b;
}

// batch strings: "", "theorem6", "adaptive:<alpha>", or an integer.
long parse_batch_int(const std::string& batch) { return std::stol(batch); }

struct SolverRun {
  Trace trace;
  std::string resolved;      // manifest echo of resolved parameters
  std::int64_t eval_samples = 0;
};

SolverRun run_one_solver(const ExperimentConfig& cfg, const TrialContext& ctx,
                         const SolverSpec& spec, int trial) {
  SolverRun out;
  RngStream stream(cfg.seed, static_cast<std::uint64_t>(trial),
                   "solver:" + spec.name);
  std::ostringstream resolved;

  if (spec.algorithm == "pg") {
    PGConfig c;
    c.gamma = spec.gamma.value_or(ctx.L);
    c.k = spec.k;
    out.trace = run_pg(*ctx.qp_oracle, *ctx.set, ctx.x0, c);
    resolved << "gamma=" << fmt17(c.gamma);
  } else if (spec.algorithm == "acpg") {
    ACPGConfig c;
    c.L0 = spec.l0 ? *spec.l0 : *spec.theta * ctx.L;
    c.k = spec.k;
    c.reset_on_new_segment = spec.reset_on_segment;
    out.trace = run_acpg(*ctx.qp_oracle, *ctx.set, ctx.x0, c);
    resolved << "L0=" << fmt17(c.L0);
  } else if (spec.algorithm == "spg") {
    SPGConfig c;
    c.gamma = spec.gamma.value_or(2.0 * ctx.L);
    c.L = ctx.L;
    c.k = spec.k;
    c.keep_iterates = true;
    const long b =
        clamp_to_dataset(spec.batch.empty() ? 1 : parse_batch_int(spec.batch), ctx);
    c.batch = BatchSchedule::constant_schedule(b);
    out.trace = run_spg(*ctx.oracle, *ctx.set, ctx.x0, c, stream);
    resolved << "gamma=" << fmt17(c.gamma) << " batch=" << b;
  } else if (spec.algorithm == "acspg" || spec.algorithm == "2acspg") {
    ACSPGConfig c;
    c.L_bar_0 = spec.l0 ? *spec.l0 : *spec.theta * ctx.L;
    c.gamma_multiplier = spec.gamma_multiplier.value_or(2.0);
    c.k = spec.k;
    c.curvature_batch = spec.curvature_batch;
    c.keep_iterates = true;
    if (spec.batch.rfind("adaptive:", 0) == 0) {
      c.grad_batch = GradBatchRule::adaptive_rule(std::stod(spec.batch.substr(9)));
      resolved << "batch=" << spec.batch;
    } else {
      const long b = clamp_to_dataset(
          spec.batch.empty() ? 1 : parse_batch_int(spec.batch), ctx);
      c.grad_batch = GradBatchRule::constant_rule(b);
      resolved << "batch=" << b;
    }
    resolved << " L_bar_0=" << fmt17(c.L_bar_0)
             << " mult=" << fmt17(c.gamma_multiplier);
    if (spec.algorithm == "acspg") {
      out.trace = run_acspg(*ctx.oracle, *ctx.set, ctx.x0, c, stream);
    } else {
      TwoPhaseConfig tp;
      tp.R = spec.R;
      tp.K = spec.K;
      tp.inner = c;
      tp.k_per_run = spec.k_per_run;
      auto [point, report] = run_two_phase(*ctx.oracle, *ctx.set, ctx.x0, tp, stream);
      out.trace = report.candidates[static_cast<std::size_t>(report.selected_run)].trace;
      out.trace.oracle_calls_total = report.total_samples;
      resolved << " R=" << spec.R << " K=" << spec.K
               << " selected_run=" << report.selected_run;
    }
  } else {  // vrspg | acvrspg
    const long N = clamp_to_dataset(
        spec.N.value_or(ctx.dataset_size > 0 ? ctx.dataset_size : 200000), ctx);
    if (spec.algorithm == "vrspg") {
      VRConfig c;
      c.gamma = spec.gamma.value_or(2.0 * ctx.L);
      c.T = spec.T;
      c.N = N;
      c.k = spec.k;
      c.keep_iterates = true;
      if (!spec.batch.empty() && spec.batch != "theorem6")
        c.inner_batch = clamp_to_dataset(parse_batch_int(spec.batch), ctx);
      out.trace = run_vrspg(*ctx.oracle, *ctx.set, ctx.x0, c, stream);
      resolved << "gamma=" << fmt17(c.gamma) << " T=" << c.T << " N=" << c.N
               << " batch="
               << (c.inner_batch > 0 ? std::to_string(c.inner_batch)
                                     : std::string("theorem6"));
    } else {
      ACVRConfig c;
      c.L_bar_0 = spec.l0 ? *spec.l0 : *spec.theta * ctx.L;
      c.gamma_multiplier = spec.gamma_multiplier.value_or(4.0);
      c.T = spec.T;
      c.N = N;
      c.k = spec.k;
      c.curvature_batch = spec.curvature_batch;
      c.keep_iterates = true;
      c.inner_batch = spec.batch.empty()
                          ? static_cast<long>(spec.T)
                          : clamp_to_dataset(parse_batch_int(spec.batch), ctx);
      out.trace = run_acvrspg(*ctx.oracle, *ctx.set, ctx.x0, c, stream);
      resolved << "L_bar_0=" << fmt17(c.L_bar_0)
               << " mult=" << fmt17(c.gamma_multiplier) << " T=" << c.T
               << " N=" << c.N << " batch=" << c.inner_batch;
    }
  }

  out.resolved = resolved.str();
  return out;
}

int resolve_cadence(const ExperimentConfig& cfg, const SolverSpec& spec) {
  if (cfg.eval.cadence) return *cfg.eval.cadence;
  return is_stochastic_algo(spec.algorithm) ? 10 : 1;
}

bool is_eval_row(int t, int cadence, int k) {
  return t == 1 || t == k || (t - 1) % cadence == 0;
}

void write_trial_csv(const std::string& path, const ExperimentConfig& cfg,
                     const TrialContext& ctx, const SolverSpec& spec, int trial,
                     const SolverRun& run, std::int64_t* eval_samples_out) {
  const Trace& trace = run.trace;
  const int cadence = resolve_cadence(cfg, spec);
  const int k = static_cast<int>(trace.records.size());
  const bool stochastic = is_stochastic_algo(spec.algorithm);

  RngStream eval_stream(cfg.seed, static_cast<std::uint64_t>(trial),
                        "eval:" + spec.name);
  std::int64_t eval_samples = 0;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,samples_cum,f,pg_norm,gamma,curvature_est\n";
  for (const auto& rec : trace.records) {
    std::optional<double> f_cell, pg_cell;
    if (is_eval_row(rec.t, cadence, k)) {
      if (!stochastic) {
        f_cell = rec.f_value;
        pg_cell = rec.pg_norm;
      } else {
        // Exact (or large-sample) mapping at x_{t-1} with the step's gamma,
        // and objective at x_t.
        const Eigen::VectorXd& x_prev =
            trace.iterates[static_cast<std::size_t>(rec.t - 1)];
        const Eigen::VectorXd& x_cur =
            trace.iterates[static_cast<std::size_t>(rec.t)];
        Eigen::VectorXd grad;
        if (ctx.oracle->has_population()) {
          grad = ctx.oracle->population_gradient(x_prev);
          f_cell = ctx.oracle->population_value(x_cur);
        } else {
          grad = ctx.oracle->batch_grad(x_prev, cfg.eval.samples, eval_stream);
          f_cell =
              ctx.oracle->batch_value_grad(x_cur, cfg.eval.samples, eval_stream)
                  .value;
          eval_samples += 2 * cfg.eval.samples;
        }
        pg_cell =
            projected_gradient(*ctx.set, x_prev, grad, rec.gamma).value.norm();
      }
    }
    out << rec.t << "," << rec.oracle_calls_cum << ",";
    if (f_cell) out << fmt17(*f_cell);
    out << ",";
    if (pg_cell) out << fmt17(*pg_cell);
    out << "," << fmt17(rec.gamma) << ",";
    if (rec.curvature) out << fmt17(*rec.curvature);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
  if (eval_samples_out) *eval_samples_out = eval_samples;
}

struct TrialCsv {
  std::vector<long> t;
  std::vector<std::optional<double>> samples, f, pg, gamma, curv;
};

std::optional<double> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

TrialCsv read_trial_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,samples_cum,f,pg_norm,gamma,curvature_est")
    throw std::runtime_error("bad trial CSV header in " + path);
  TrialCsv csv;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != 6)
      throw std::runtime_error("bad trial CSV row in " + path);
    csv.t.push_back(std::stol(cells[0]));
    csv.samples.push_back(parse_cell(cells[1]));
    csv.f.push_back(parse_cell(cells[2]));
    csv.pg.push_back(parse_cell(cells[3]));
    csv.gamma.push_back(parse_cell(cells[4]));
    csv.curv.push_back(parse_cell(cells[5]));
  }
  return csv;
}

// mean and sample std over per-trial optional cells; all-present or
// all-absent per row is required.
void reduce(const std::vector<TrialCsv>& trials,
            std::vector<std::optional<double>> TrialCsv::*member, std::size_t row,
            std::optional<double>* mean_out, std::optional<double>* std_out) {
  const std::size_t n = trials.size();
  std::size_t present = 0;
  double sum = 0.0;
  for (const auto& t : trials) {
    const auto& cell = (t.*member)[row];
    if (cell) {
      ++present;
      sum += *cell;
    }
  }
  if (present == 0) {
    *mean_out = std::nullopt;
    *std_out = std::nullopt;
    return;
  }
  if (present != n)
    throw std::runtime_error("aggregate: misaligned metric cells across trials");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& t : trials) {
    const double d = *(t.*member)[row] - mean;
    ss += d * d;
  }
  *mean_out = mean;
  *std_out = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

}  // namespace

AggregateCurve aggregate_trials(const std::vector<std::string>& trial_csvs) {
  if (trial_csvs.empty())
    throw std::invalid_argument("aggregate: need at least one trial file");
  std::vector<TrialCsv> trials;
  trials.reserve(trial_csvs.size());
  for (const auto& path : trial_csvs) trials.push_back(read_trial_csv(path));
  const auto& t0 = trials.front().t;
  for (const auto& t : trials)
    if (t.t != t0) throw std::runtime_error("aggregate: misaligned abscissas");

  AggregateCurve curve;
  curve.t = t0;
  const std::size_t rows = t0.size();
  for (std::size_t i = 0; i < rows; ++i) {
    std::optional<double> m, s;
    reduce(trials, &TrialCsv::samples, i, &m, &s);
    curve.samples_mean.push_back(m.value_or(0.0));
    reduce(trials, &TrialCsv::f, i, &m, &s);
    curve.f_mean.push_back(m);
    curve.f_std.push_back(s);
    reduce(trials, &TrialCsv::pg, i, &m, &s);
    curve.pg_mean.push_back(m);
    curve.pg_std.push_back(s);
    reduce(trials, &TrialCsv::gamma, i, &m, &s);
    curve.gamma_mean.push_back(m.value_or(0.0));
    curve.gamma_std.push_back(s.value_or(0.0));
    reduce(trials, &TrialCsv::curv, i, &m, &s);
    curve.curv_mean.push_back(m);
    curve.curv_std.push_back(s);
  }
  return curve;
}

void write_curve_csv(const AggregateCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,samples_cum_mean,f_mean,f_std,pg_norm_mean,pg_norm_std,"
         "gamma_mean,gamma_std,curvature_mean,curvature_std\n";
  auto cell = [&](const std::optional<double>& v) {
    if (v) out << fmt17(*v);
    out << ",";
  };
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    out << curve.t[i] << "," << fmt17(curve.samples_mean[i]) << ",";
    cell(curve.f_mean[i]);
    cell(curve.f_std[i]);
    cell(curve.pg_mean[i]);
    cell(curve.pg_std[i]);
    out << fmt17(curve.gamma_mean[i]) << "," << fmt17(curve.gamma_std[i]) << ",";
    cell(curve.curv_mean[i]);
    if (curve.curv_std[i]) out << fmt17(*curve.curv_std[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

AggregateCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,samples_cum_mean,f_mean,f_std,pg_norm_mean,pg_norm_std,"
              "gamma_mean,gamma_std,curvature_mean,curvature_std")
    throw std::runtime_error("bad curve CSV header in " + path);
  AggregateCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != 10)
      throw std::runtime_error("bad curve CSV row in " + path);
    curve.t.push_back(std::stol(cells[0]));
    curve.samples_mean.push_back(std::stod(cells[1]));
    curve.f_mean.push_back(parse_cell(cells[2]));
    curve.f_std.push_back(parse_cell(cells[3]));
    curve.pg_mean.push_back(parse_cell(cells[4]));
    curve.pg_std.push_back(parse_cell(cells[5]));
    curve.gamma_mean.push_back(std::stod(cells[6]));
    curve.gamma_std.push_back(std::stod(cells[7]));
    curve.curv_mean.push_back(parse_cell(cells[8]));
    curve.curv_std.push_back(parse_cell(cells[9]));
  }
  return curve;
}

RunResult run_experiment(const ExperimentConfig& base_config,
                         const RunOptions& options) {
  ExperimentConfig cfg = base_config;
  if (options.seed) cfg.seed = *options.seed;
  if (options.trials) cfg.trials = *options.trials;
  if (options.output_dir) cfg.output_dir = *options.output_dir;
  validate_config(cfg);
  const int jobs = std::max(1, options.jobs);

  RunResult result;
  result.output_dir = cfg.output_dir;
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream cfg_out(fs::path(cfg.output_dir) / "config.txt");
    cfg_out << serialize_config(cfg);
  }

  struct TaskInfo {
    std::string resolved;
    std::int64_t samples = 0;
    std::int64_t eval_samples = 0;
    std::optional<int> output_index;
    double wall_seconds = 0.0;
    std::string failure;
    bool ran = false;
  };
  struct TrialInfo {
    double L = 0.0;
    double sigma2_est = -1.0;  // stochastic problems only
    std::vector<TaskInfo> tasks;  // one per solver
  };
  std::vector<TrialInfo> trials(static_cast<std::size_t>(cfg.trials));
  for (auto& t : trials) t.tasks.resize(cfg.solvers.size());

  std::atomic<int> next_trial{0};
  auto worker = [&]() {
    while (true) {
      const int trial = next_trial.fetch_add(1);
      if (trial >= cfg.trials) return;
      TrialInfo& info = trials[static_cast<std::size_t>(trial)];
      std::optional<TrialContext> ctx;
      try {
        ctx = build_trial_context(cfg, trial);
        info.L = ctx->L;
        if (ctx->oracle) {
          RngStream probe(cfg.seed, static_cast<std::uint64_t>(trial), "sigma2");
          info.sigma2_est = estimate_sigma2(*ctx->oracle, *ctx->set, probe);
        }
      } catch (const std::exception& e) {
        for (std::size_t si = 0; si < cfg.solvers.size(); ++si)
          info.tasks[si].failure = std::string("instance generation: ") + e.what();
        continue;
      }
      for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
        const SolverSpec& spec = cfg.solvers[si];
        TaskInfo& task = info.tasks[si];
        const auto start = std::chrono::steady_clock::now();
        try {
          SolverRun run = run_one_solver(cfg, *ctx, spec, trial);
          const std::string path =
              (fs::path(cfg.output_dir) /
               ("trial_" + spec.name + "_" + std::to_string(trial) + ".csv"))
                  .string();
          std::int64_t eval_samples = 0;
          write_trial_csv(path, cfg, *ctx, spec, trial, run, &eval_samples);
          task.resolved = run.resolved;
          task.samples = run.trace.oracle_calls_total;
          task.eval_samples = eval_samples;
          task.output_index = run.trace.output_index;
          task.ran = true;
        } catch (const std::exception& e) {
          task.failure = e.what();
        }
        task.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
      }
    }
  };

  {
    std::vector<std::thread> pool;
    const int n_workers = std::min(jobs, cfg.trials);
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Aggregate whatever completed, per solver.
  for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
    const SolverSpec& spec = cfg.solvers[si];
    std::vector<std::string> files;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      if (trials[static_cast<std::size_t>(trial)].tasks[si].ran)
        files.push_back((fs::path(cfg.output_dir) /
                         ("trial_" + spec.name + "_" + std::to_string(trial) +
                          ".csv"))
                            .string());
    }
    if (files.empty()) continue;
    try {
      const AggregateCurve curve = aggregate_trials(files);
      write_curve_csv(curve, (fs::path(cfg.output_dir) /
                              ("curve_" + spec.name + ".csv"))
                                 .string());
    } catch (const std::exception& e) {
      result.failures.push_back("aggregate solver " + spec.name + ": " + e.what());
    }
  }

  // Deterministic manifest (no wall times) plus a separate timing file.
  {
    std::ofstream man(fs::path(cfg.output_dir) / "manifest.txt");
    man << "# experiment manifest\n" << serialize_config(cfg);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const TrialInfo& info = trials[static_cast<std::size_t>(trial)];
      man << "derived.trial." << trial << ".L = " << fmt17(info.L) << "\n";
      if (info.sigma2_est >= 0.0)
        man << "derived.trial." << trial
            << ".sigma2_est = " << fmt17(info.sigma2_est) << "\n";
    }
    for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
      const SolverSpec& spec = cfg.solvers[si];
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const TaskInfo& task =
            trials[static_cast<std::size_t>(trial)].tasks[si];
        const std::string prefix =
            "derived." + spec.name + ".trial." + std::to_string(trial) + ".";
        if (!task.failure.empty()) {
          man << prefix << "failure = " << task.failure << "\n";
          continue;
        }
        man << prefix << "params = " << task.resolved << "\n";
        man << prefix << "samples_total = " << task.samples << "\n";
        if (task.eval_samples > 0)
          man << prefix << "eval_samples = " << task.eval_samples << "\n";
        if (task.output_index)
          man << prefix << "output_index = " << *task.output_index << "\n";
      }
    }
    std::ofstream tim(fs::path(cfg.output_dir) / "timings.txt");
    for (std::size_t si = 0; si < cfg.solvers.size(); ++si)
      for (int trial = 0; trial < cfg.trials; ++trial) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f",
                      trials[static_cast<std::size_t>(trial)].tasks[si].wall_seconds);
        tim << cfg.solvers[si].name << " trial " << trial << " " << buf
            << " s\n";
      }
  }

  for (int trial = 0; trial < cfg.trials; ++trial)
    for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
      const auto& task = trials[static_cast<std::size_t>(trial)].tasks[si];
      if (!task.failure.empty())
        result.failures.push_back("trial " + std::to_string(trial) + " solver " +
                                  cfg.solvers[si].name + ": " + task.failure);
    }
  result.ok = result.failures.empty();
  return result;
}

void plot_directory(const std::string& dir) {
  std::vector<std::pair<std::string, AggregateCurve>> curves;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("curve_", 0) == 0 && entry.path().extension() == ".csv")
      paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    std::string label = p.filename().string();
    label = label.substr(6, label.size() - 10);  // strip curve_ / .csv
    curves.emplace_back(label, read_curve_csv(p.string()));
  }
  if (curves.empty())
    throw std::runtime_error("plot: no curve_*.csv files in " + dir);

  auto build = [&](auto x_of, auto y_of, auto dev_of) {
    std::vector<Curve> out;
    for (const auto& [label, agg] : curves) {
      Curve c;
      c.label = label;
      for (std::size_t i = 0; i < agg.t.size(); ++i) {
        const auto y = y_of(agg, i);
        if (!y) continue;
        c.x.push_back(x_of(agg, i));
        c.mean.push_back(*y);
        const auto d = dev_of(agg, i);
        c.dev.push_back(d.value_or(0.0));
      }
      if (!c.x.empty()) out.push_back(std::move(c));
    }
    return out;
  };

  const auto pg_by_iter = build(
      [](const AggregateCurve& a, std::size_t i) { return static_cast<double>(a.t[i]); },
      [](const AggregateCurve& a, std::size_t i) { return a.pg_mean[i]; },
      [](const AggregateCurve& a, std::size_t i) { return a.pg_std[i]; });
  const auto pg_by_samples = build(
      [](const AggregateCurve& a, std::size_t i) { return a.samples_mean[i]; },
      [](const AggregateCurve& a, std::size_t i) { return a.pg_mean[i]; },
      [](const AggregateCurve& a, std::size_t i) { return a.pg_std[i]; });
  const auto gamma_by_iter = build(
      [](const AggregateCurve& a, std::size_t i) { return static_cast<double>(a.t[i]); },
      [](const AggregateCurve& a, std::size_t i) {
        return std::optional<double>(a.gamma_mean[i]);
      },
      [](const AggregateCurve& a, std::size_t i) {
        return std::optional<double>(a.gamma_std[i]);
      });

  PlotSpec spec;
  spec.log_y = true;
  spec.title = "projected gradient mapping norm";
  spec.x_label = "iteration";
  spec.y_label = "||g_X||";
  if (!pg_by_iter.empty())
    emit_plot(pg_by_iter, spec, (fs::path(dir) / "pg_vs_iteration.svg").string(),
              (fs::path(dir) / "pg_vs_iteration.dat").string());
  spec.x_label = "cumulative samples";
  if (!pg_by_samples.empty())
    emit_plot(pg_by_samples, spec, (fs::path(dir) / "pg_vs_samples.svg").string(),
              (fs::path(dir) / "pg_vs_samples.dat").string());
  spec.log_y = false;
  spec.title = "stepsize parameter";
  spec.x_label = "iteration";
  spec.y_label = "gamma";
  if (!gamma_by_iter.empty())
    emit_plot(gamma_by_iter, spec, (fs::path(dir) / "gamma_vs_iteration.svg").string(),
              (fs::path(dir) / "gamma_vs_iteration.dat").string());
}

}  // namespace projgrad
