#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace projgrad {

// Configuration error carrying the offending line (0 when the problem is not
// tied to a specific line, e.g. a missing required key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

struct QpProblemSpec {
  int n = 0;
  double box_lower = -5.0;
  double box_upper = 5.0;
  bool operator==(const QpProblemSpec&) const = default;
};

struct SvmProblemSpec {
  int n = 0;
  bool online = false;     // finite_sum by default
  long samples = 200000;   // M, finite-sum dataset size
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  double lambda3 = 1.0;
  std::string dataset;     // optional pre-generated dataset file
  bool operator==(const SvmProblemSpec&) const = default;
};

struct ProblemSpec {
  enum class Kind { qp, svm };
  Kind kind = Kind::qp;
  QpProblemSpec qp;
  SvmProblemSpec svm;
  bool operator==(const ProblemSpec&) const = default;
};

// One solver section. Fields irrelevant to the chosen algorithm stay at
// their defaults; "auto" values resolve against the problem instance at run
// time (gamma: ||Q|| for PG, 2L for SPG/VR-SPG; N: the dataset size).
struct SolverSpec {
  std::string name;
  std::string algorithm;  // pg | acpg | spg | acspg | 2acspg | vrspg | acvrspg
  int k = 0;
  std::optional<double> gamma;             // empty = auto
  std::optional<double> theta;             // L0 = theta * L
  std::optional<double> l0;                // explicit L0 (wins over theta)
  std::optional<double> gamma_multiplier;  // empty = algorithm default
  std::string batch;                       // "", "theorem6", "adaptive:<a>", or int
  int T = 10;
  std::optional<long> N;                   // empty = auto
  long curvature_batch = 1;
  int R = 2;
  long K = 1000;
  std::vector<int> k_per_run;              // 2acspg only
  bool reset_on_segment = false;
  bool operator==(const SolverSpec&) const = default;
};

struct EvalSpec {
  std::optional<int> cadence;  // empty = auto (1 deterministic, 10 stochastic)
  long samples = 100000;       // online-mode evaluation sample count
  bool operator==(const EvalSpec&) const = default;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  int trials = 1;
  std::uint64_t seed = 0;
  bool fixed_instance = false;
  EvalSpec eval;
  std::string output_dir = "out";
  bool operator==(const ExperimentConfig&) const = default;
};

// Strict parse of the line-oriented `section.key = value` format. Unknown
// keys, type mismatches, and missing required fields raise ConfigError with
// the line number where applicable. Defaults are applied into the result.
ExperimentConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

// Per-algorithm structural validation (key compatibility, required fields,
// problem/solver pairing). Called by parse_config; exposed for reuse.
void validate_config(const ExperimentConfig& config);

}  // namespace projgrad
