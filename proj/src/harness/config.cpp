#include "projgrad/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace projgrad {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

struct Entry {
  int line;
  std::string value;
  bool used = false;
};

struct RawConfig {
  std::map<std::string, Entry> entries;
  std::vector<std::string> solver_order;  // first-appearance order of names
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen_solvers;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    if (value.empty()) throw ConfigError(line_no, "empty value for key `" + key + "`");
    if (raw.entries.count(key))
      throw ConfigError(line_no, "duplicate key `" + key + "`");
    raw.entries[key] = {line_no, value};
    const auto parts = split(key, '.');
    if (parts.size() >= 2 && parts[0] == "solver") {
      if (parts.size() != 3)
        throw ConfigError(line_no,
                          "solver keys look like solver.<name>.<param>");
      if (seen_solvers.insert(parts[1]).second)
        raw.solver_order.push_back(parts[1]);
    }
  }
  return raw;
}

class Reader {
 public:
  explicit Reader(RawConfig& raw) : raw_(&raw) {}

  bool has(const std::string& key) const { return raw_->entries.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return fallback;
    it->second.used = true;
    return it->second.value;
  }

  std::string required(const std::string& key) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end())
      throw ConfigError(0, "missing required key `" + key + "`");
    it->second.used = true;
    return it->second.value;
  }

  long integer(const std::string& key, long fallback) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return fallback;
    it->second.used = true;
    return to_long(it->second.value, it->second.line, key);
  }

  double real(const std::string& key, double fallback) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return fallback;
    it->second.used = true;
    return to_double(it->second.value, it->second.line, key);
  }

  bool boolean(const std::string& key, bool fallback) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return fallback;
    it->second.used = true;
    if (it->second.value == "true") return true;
    if (it->second.value == "false") return false;
    throw ConfigError(it->second.line,
                      "key `" + key + "` expects true or false");
  }

  // "auto" maps to empty; otherwise a number.
  std::optional<double> auto_real(const std::string& key) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return std::nullopt;
    it->second.used = true;
    if (it->second.value == "auto") return std::nullopt;
    return to_double(it->second.value, it->second.line, key);
  }

  std::optional<long> auto_integer(const std::string& key) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return std::nullopt;
    it->second.used = true;
    if (it->second.value == "auto") return std::nullopt;
    return to_long(it->second.value, it->second.line, key);
  }

  std::optional<double> optional_real(const std::string& key) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return std::nullopt;
    it->second.used = true;
    return to_double(it->second.value, it->second.line, key);
  }

  std::vector<int> int_list(const std::string& key) {
    auto it = raw_->entries.find(key);
    if (it == raw_->entries.end()) return {};
    it->second.used = true;
    std::vector<int> out;
    for (const auto& piece : split(it->second.value, ','))
      out.push_back(static_cast<int>(to_long(trim(piece), it->second.line, key)));
    return out;
  }

  int line_of(const std::string& key) const {
    auto it = raw_->entries.find(key);
    return it == raw_->entries.end() ? 0 : it->second.line;
  }

  void reject_unused() const {
    for (const auto& [key, entry] : raw_->entries)
      if (!entry.used)
        throw ConfigError(entry.line, "unknown key `" + key + "`");
  }

 private:
  static long to_long(const std::string& v, int line, const std::string& key) {
    try {
      std::size_t used = 0;
      const long out = std::stol(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing chars");
      return out;
    } catch (const std::exception&) {
      throw ConfigError(line, "key `" + key + "` expects an integer, got `" + v + "`");
    }
  }

  static double to_double(const std::string& v, int line,
                          const std::string& key) {
    try {
      std::size_t used = 0;
      const double out = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing chars");
      return out;
    } catch (const std::exception&) {
      throw ConfigError(line, "key `" + key + "` expects a number, got `" + v + "`");
    }
  }

  RawConfig* raw_;
};

const std::set<std::string> kAlgorithms = {"pg",     "acpg",    "spg",
                                           "acspg",  "2acspg",  "vrspg",
                                           "acvrspg"};

bool is_stochastic(const std::string& algo) {
  return algo != "pg" && algo != "acpg";
}

bool is_auto_conditioned(const std::string& algo) {
  return algo == "acpg" || algo == "acspg" || algo == "2acspg" ||
         algo == "acvrspg";
}

const std::set<std::string>& allowed_params(const std::string& algo) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"pg", {"gamma"}},
      {"acpg", {"theta", "l0", "reset_on_segment"}},
      {"spg", {"gamma", "batch"}},
      {"acspg", {"theta", "l0", "gamma_multiplier", "batch", "curvature_batch"}},
      {"2acspg",
       {"theta", "l0", "gamma_multiplier", "batch", "curvature_batch", "R", "K",
        "k_per_run"}},
      {"vrspg", {"gamma", "batch", "T", "N"}},
      {"acvrspg",
       {"theta", "l0", "gamma_multiplier", "batch", "T", "N",
        "curvature_batch"}},
  };
  return table.at(algo);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_batch_string(const SolverSpec& s) {
  const std::string& b = s.batch;
  if (b.empty() || b == "theorem6") return;
  if (b.rfind("adaptive:", 0) == 0) {
    const std::string alpha = b.substr(9);
    try {
      std::size_t used = 0;
      const double a = std::stod(alpha, &used);
      if (used != alpha.size() || !(a > 0)) throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      throw ConfigError(0, "solver." + s.name +
                               ".batch: adaptive:<alpha> needs a positive number");
    }
    return;
  }
  try {
    std::size_t used = 0;
    const long v = std::stol(b, &used);
    if (used != b.size() || v < 1) throw std::invalid_argument("bad");
  } catch (const std::exception&) {
    throw ConfigError(0, "solver." + s.name +
                             ".batch: expects an integer, theorem6, or adaptive:<alpha>");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  RawConfig raw = tokenize(text);
  Reader r(raw);
  ExperimentConfig cfg;

  const std::string kind = r.required("problem.kind");
  if (kind == "qp") {
    cfg.problem.kind = ProblemSpec::Kind::qp;
    cfg.problem.qp.n = static_cast<int>(r.integer("problem.n", 0));
    cfg.problem.qp.box_lower = r.real("problem.box.lower", -5.0);
    cfg.problem.qp.box_upper = r.real("problem.box.upper", 5.0);
    if (cfg.problem.qp.n < 1)
      throw ConfigError(r.line_of("problem.n"), "problem.n must be >= 1");
    if (!(cfg.problem.qp.box_lower < cfg.problem.qp.box_upper))
      throw ConfigError(r.line_of("problem.box.lower"),
                        "problem box needs lower < upper");
  } else if (kind == "svm") {
    cfg.problem.kind = ProblemSpec::Kind::svm;
    cfg.problem.svm.n = static_cast<int>(r.integer("problem.n", 0));
    const std::string mode = r.str("problem.mode", "finite_sum");
    if (mode == "finite_sum") {
      cfg.problem.svm.online = false;
    } else if (mode == "online") {
      cfg.problem.svm.online = true;
    } else {
      throw ConfigError(r.line_of("problem.mode"),
                        "problem.mode must be finite_sum or online");
    }
    cfg.problem.svm.samples = r.integer("problem.samples", 200000);
    cfg.problem.svm.lambda1 = r.real("problem.lambda1", 0.5);
    cfg.problem.svm.lambda2 = r.real("problem.lambda2", 0.5);
    cfg.problem.svm.lambda3 = r.real("problem.lambda3", 1.0);
    cfg.problem.svm.dataset = r.str("problem.dataset", "");
    if (cfg.problem.svm.n < 1)
      throw ConfigError(r.line_of("problem.n"), "problem.n must be >= 1");
    if (cfg.problem.svm.samples < 1)
      throw ConfigError(r.line_of("problem.samples"),
                        "problem.samples must be >= 1");
  } else {
    throw ConfigError(r.line_of("problem.kind"),
                      "problem.kind must be qp or svm");
  }

  cfg.trials = static_cast<int>(r.integer("trials", 1));
  if (cfg.trials < 1)
    throw ConfigError(r.line_of("trials"), "trials must be >= 1");
  cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
  cfg.fixed_instance = r.boolean("fixed_instance", false);
  cfg.output_dir = r.str("output", "out");

  const std::string cadence = r.str("eval.cadence", "auto");
  if (cadence == "auto") {
    cfg.eval.cadence = std::nullopt;
  } else {
    try {
      cfg.eval.cadence = std::stoi(cadence);
    } catch (const std::exception&) {
      throw ConfigError(r.line_of("eval.cadence"),
                        "eval.cadence must be auto or an integer");
    }
    if (*cfg.eval.cadence < 1)
      throw ConfigError(r.line_of("eval.cadence"), "eval.cadence must be >= 1");
  }
  cfg.eval.samples = r.integer("eval.samples", 100000);
  if (cfg.eval.samples < 1)
    throw ConfigError(r.line_of("eval.samples"), "eval.samples must be >= 1");

  for (const std::string& name : raw.solver_order) {
    const std::string prefix = "solver." + name + ".";
    SolverSpec s;
    s.name = name;
    s.algorithm = r.required(prefix + "algorithm");
    if (!kAlgorithms.count(s.algorithm))
      throw ConfigError(r.line_of(prefix + "algorithm"),
                        "solver." + name + ".algorithm: unknown algorithm `" +
                            s.algorithm + "`");

    // Reject keys that do not apply to the chosen algorithm.
    const std::set<std::string>& allowed = allowed_params(s.algorithm);
    for (const auto& [key, entry] : raw.entries) {
      if (key.rfind(prefix, 0) != 0) continue;
      const std::string param = key.substr(prefix.size());
      if (param != "algorithm" && param != "k" && !allowed.count(param))
        throw ConfigError(entry.line, "key `" + key + "` does not apply to " +
                                          s.algorithm);
    }

    s.k = static_cast<int>(r.integer(prefix + "k", 0));
    if (allowed.count("gamma")) s.gamma = r.auto_real(prefix + "gamma");
    if (allowed.count("theta")) {
      s.theta = r.optional_real(prefix + "theta");
      s.l0 = r.optional_real(prefix + "l0");
    }
    if (allowed.count("gamma_multiplier"))
      s.gamma_multiplier = r.auto_real(prefix + "gamma_multiplier");
    if (allowed.count("batch")) s.batch = r.str(prefix + "batch", "");
    if (allowed.count("T")) {
      s.T = static_cast<int>(r.integer(prefix + "T", 10));
      s.N = r.auto_integer(prefix + "N");
    }
    if (allowed.count("curvature_batch"))
      s.curvature_batch = r.integer(prefix + "curvature_batch", 1);
    if (allowed.count("R")) {
      s.R = static_cast<int>(r.integer(prefix + "R", 2));
      s.K = r.integer(prefix + "K", 1000);
      s.k_per_run = r.int_list(prefix + "k_per_run");
    }
    if (allowed.count("reset_on_segment"))
      s.reset_on_segment = r.boolean(prefix + "reset_on_segment", false);
    cfg.solvers.push_back(std::move(s));
  }

  r.reject_unused();
  validate_config(cfg);
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.solvers.empty()) throw ConfigError(0, "no solver sections configured");
  std::set<std::string> names;
  for (const auto& s : cfg.solvers) {
    if (!names.insert(s.name).second)
      throw ConfigError(0, "duplicate solver name `" + s.name + "`");
    if (!kAlgorithms.count(s.algorithm))
      throw ConfigError(0, "solver." + s.name + ".algorithm: unknown algorithm `" +
                               s.algorithm + "`");
    if (s.k < 1)
      throw ConfigError(0, "solver." + s.name + ".k must be >= 1");
    check_batch_string(s);

    const bool qp = cfg.problem.kind == ProblemSpec::Kind::qp;
    if (is_stochastic(s.algorithm) && qp)
      throw ConfigError(0, "solver." + s.name + ": " + s.algorithm +
                               " needs the svm problem (stochastic oracle)");
    if (!is_stochastic(s.algorithm) && !qp)
      throw ConfigError(0, "solver." + s.name + ": " + s.algorithm +
                               " needs the qp problem (exact oracle)");

    if (is_auto_conditioned(s.algorithm)) {
      if (!s.theta.has_value() && !s.l0.has_value())
        throw ConfigError(0, "solver." + s.name +
                                 ": auto-conditioned solvers need theta or l0");
      if (s.theta.has_value() && !(*s.theta > 0))
        throw ConfigError(0, "solver." + s.name + ".theta must be positive");
      if (s.l0.has_value() && !(*s.l0 > 0))
        throw ConfigError(0, "solver." + s.name + ".l0 must be positive");
    }
    if (s.batch == "theorem6" && s.algorithm != "vrspg")
      throw ConfigError(0, "solver." + s.name +
                               ".batch: theorem6 applies to vrspg only");
    if (s.batch.rfind("adaptive:", 0) == 0 && s.algorithm != "acspg" &&
        s.algorithm != "2acspg")
      throw ConfigError(0, "solver." + s.name +
                               ".batch: adaptive applies to acspg/2acspg only");
    if (s.algorithm == "vrspg" || s.algorithm == "acvrspg") {
      if (s.T < 1) throw ConfigError(0, "solver." + s.name + ".T must be >= 1");
      if (s.k < s.T)
        throw ConfigError(0, "solver." + s.name + ": requires k >= T");
      if (s.N.has_value() && *s.N < 1)
        throw ConfigError(0, "solver." + s.name + ".N must be >= 1");
    }
    if (s.curvature_batch < 1)
      throw ConfigError(0, "solver." + s.name + ".curvature_batch must be >= 1");
    if (s.algorithm == "2acspg") {
      if (s.R < 1) throw ConfigError(0, "solver." + s.name + ".R must be >= 1");
      if (s.K < 1) throw ConfigError(0, "solver." + s.name + ".K must be >= 1");
      if (!s.k_per_run.empty() &&
          s.k_per_run.size() != static_cast<std::size_t>(s.R))
        throw ConfigError(0, "solver." + s.name +
                                 ".k_per_run must list exactly R entries");
    }
  }
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  if (cfg.problem.kind == ProblemSpec::Kind::qp) {
    out << "problem.kind = qp\n";
    out << "problem.n = " << cfg.problem.qp.n << "\n";
    out << "problem.box.lower = " << fmt_double(cfg.problem.qp.box_lower) << "\n";
    out << "problem.box.upper = " << fmt_double(cfg.problem.qp.box_upper) << "\n";
  } else {
    const auto& svm = cfg.problem.svm;
    out << "problem.kind = svm\n";
    out << "problem.n = " << svm.n << "\n";
    out << "problem.mode = " << (svm.online ? "online" : "finite_sum") << "\n";
    out << "problem.samples = " << svm.samples << "\n";
    out << "problem.lambda1 = " << fmt_double(svm.lambda1) << "\n";
    out << "problem.lambda2 = " << fmt_double(svm.lambda2) << "\n";
    out << "problem.lambda3 = " << fmt_double(svm.lambda3) << "\n";
    if (!svm.dataset.empty()) out << "problem.dataset = " << svm.dataset << "\n";
  }
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "fixed_instance = " << (cfg.fixed_instance ? "true" : "false") << "\n";
  out << "eval.cadence = "
      << (cfg.eval.cadence ? std::to_string(*cfg.eval.cadence) : "auto") << "\n";
  out << "eval.samples = " << cfg.eval.samples << "\n";
  out << "output = " << cfg.output_dir << "\n";

  for (const auto& s : cfg.solvers) {
    const std::string p = "solver." + s.name + ".";
    out << p << "algorithm = " << s.algorithm << "\n";
    out << p << "k = " << s.k << "\n";
    if (s.algorithm == "pg" || s.algorithm == "spg" || s.algorithm == "vrspg")
      out << p << "gamma = " << (s.gamma ? fmt_double(*s.gamma) : "auto") << "\n";
    if (s.theta) out << p << "theta = " << fmt_double(*s.theta) << "\n";
    if (s.l0) out << p << "l0 = " << fmt_double(*s.l0) << "\n";
    if (s.algorithm == "acspg" || s.algorithm == "2acspg" ||
        s.algorithm == "acvrspg")
      out << p << "gamma_multiplier = "
          << (s.gamma_multiplier ? fmt_double(*s.gamma_multiplier) : "auto")
          << "\n";
    if (!s.batch.empty()) out << p << "batch = " << s.batch << "\n";
    if (s.algorithm == "vrspg" || s.algorithm == "acvrspg") {
      out << p << "T = " << s.T << "\n";
      out << p << "N = " << (s.N ? std::to_string(*s.N) : "auto") << "\n";
    }
    if (s.algorithm == "acspg" || s.algorithm == "2acspg" ||
        s.algorithm == "acvrspg")
      out << p << "curvature_batch = " << s.curvature_batch << "\n";
    if (s.algorithm == "2acspg") {
      out << p << "R = " << s.R << "\n";
      out << p << "K = " << s.K << "\n";
      if (!s.k_per_run.empty()) {
        out << p << "k_per_run = ";
        for (std::size_t i = 0; i < s.k_per_run.size(); ++i)
          out << (i ? "," : "") << s.k_per_run[i];
        out << "\n";
      }
    }
    if (s.algorithm == "acpg" && s.reset_on_segment)
      out << p << "reset_on_segment = true\n";
  }
  return out.str();
}

}  // namespace projgrad
