#include "projgrad/harness/presets.hpp"

#include <sstream>
#include <stdexcept>

namespace projgrad {

namespace {

const struct {
  const char* name;
  double theta;
} kThetas[] = {{"t01", 0.1}, {"t02", 0.2}, {"t05", 0.5}, {"t0001", 0.001}};

std::string qp_fig1() {
  std::ostringstream out;
  out << "# Box-constrained indefinite QP: PG vs AC-PG from four initial\n"
         "# curvature estimates. One fresh random instance per trial; the\n"
         "# initial point is drawn uniformly from the box (an assumption,\n"
         "# not part of the problem definition).\n"
         "problem.kind = qp\n"
         "problem.n = 100\n"
         "problem.box.lower = -5\n"
         "problem.box.upper = 5\n"
         "trials = 10\n"
         "seed = 90101\n"
         "eval.cadence = auto\n"
         "output = out/qp-fig1\n"
         "\n"
         "solver.pg.algorithm = pg\n"
         "solver.pg.gamma = auto\n"
         "solver.pg.k = 1000\n";
  for (const auto& t : kThetas) {
    out << "\nsolver.acpg_" << t.name << ".algorithm = acpg\n"
        << "solver.acpg_" << t.name << ".theta = " << t.theta << "\n"
        << "solver.acpg_" << t.name << ".k = 1000\n";
  }
  return out.str();
}

std::string svm(int n, bool online) {
  std::ostringstream out;
  out << "# Semisupervised smoothed SVM, "
      << (online ? "online sampling" : "pre-generated finite-sum data")
      << " (n=" << n << ").\n"
      << "# SPG/VR-SPG use gamma = 2L; the auto-conditioned variants start\n"
         "# from L0 = theta * L and use gamma = 3 * (running estimate).\n"
         "# The initial point is drawn uniformly from the feasible set (an\n"
         "# assumption, not part of the problem definition).\n"
         "problem.kind = svm\n"
      << "problem.n = " << n << "\n"
      << "problem.mode = " << (online ? "online" : "finite_sum") << "\n";
  if (!online) out << "problem.samples = 200000\n";
  out << "problem.lambda1 = 0.5\n"
         "problem.lambda2 = 0.5\n"
         "problem.lambda3 = 1\n"
      << "trials = 10\n"
      << "seed = 90" << (online ? "3" : "2") << (n == 10 ? "10" : "11") << "\n"
      << "eval.cadence = auto\n"
      << "eval.samples = 100000\n"
      << "output = out/svm-" << (online ? "online" : "finite") << "-n" << n
      << "\n"
      << "\n"
         "solver.spg.algorithm = spg\n"
         "solver.spg.gamma = auto\n"
         "solver.spg.k = 1000\n"
         "solver.spg.batch = 25000\n";
  for (const auto& t : kThetas) {
    out << "\nsolver.acspg_" << t.name << ".algorithm = acspg\n"
        << "solver.acspg_" << t.name << ".theta = " << t.theta << "\n"
        << "solver.acspg_" << t.name << ".gamma_multiplier = 3\n"
        << "solver.acspg_" << t.name << ".k = 1000\n"
        << "solver.acspg_" << t.name << ".batch = 25000\n"
        << "solver.acspg_" << t.name << ".curvature_batch = 1\n";
  }
  out << "\nsolver.vrspg.algorithm = vrspg\n"
         "solver.vrspg.gamma = auto\n"
         "solver.vrspg.k = 1000\n"
         "solver.vrspg.T = 10\n"
      << "solver.vrspg.N = " << (online ? "200000" : "auto") << "\n"
      << "solver.vrspg.batch = 5000\n";
  for (const auto& t : kThetas) {
    out << "\nsolver.acvrspg_" << t.name << ".algorithm = acvrspg\n"
        << "solver.acvrspg_" << t.name << ".theta = " << t.theta << "\n"
        << "solver.acvrspg_" << t.name << ".gamma_multiplier = 3\n"
        << "solver.acvrspg_" << t.name << ".k = 1000\n"
        << "solver.acvrspg_" << t.name << ".T = 10\n"
        << "solver.acvrspg_" << t.name
        << ".N = " << (online ? "200000" : "auto") << "\n"
        << "solver.acvrspg_" << t.name << ".batch = 5000\n"
        << "solver.acvrspg_" << t.name << ".curvature_batch = 1\n";
  }
  return out.str();
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"qp-fig1", "svm-finite-n10", "svm-finite-n100", "svm-online-n10",
          "svm-online-n100"};
}

bool has_preset(const std::string& name) {
  for (const auto& p : preset_names())
    if (p == name) return true;
  return false;
}

std::string emit_preset(const std::string& name) {
  if (name == "qp-fig1") return qp_fig1();
  if (name == "svm-finite-n10") return svm(10, false);
  if (name == "svm-finite-n100") return svm(100, false);
  if (name == "svm-online-n10") return svm(10, true);
  if (name == "svm-online-n100") return svm(100, true);
  throw std::invalid_argument("unknown preset `" + name + "`");
}

}  // namespace projgrad
