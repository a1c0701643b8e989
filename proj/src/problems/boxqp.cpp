#include "projgrad/problems/boxqp.hpp"

#include <cmath>
#include <stdexcept>

namespace projgrad {

namespace {

constexpr int kMaxPowerIters = 100000;
constexpr double kResidualTol = 1e-9;

void require_symmetric(const Eigen::MatrixXd& Q) {
  if (Q.rows() != Q.cols())
    throw std::invalid_argument("spectral_norm: matrix must be square");
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("spectral_norm: matrix must be symmetric");
}

Eigen::VectorXd power_start(int n) {
  // Deterministic start with broken symmetry.
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  return v / v.norm();
}

// Top eigenvalue of a symmetric PSD operator given by apply(), with a
// residual-based stopping rule: ||A v - lambda v|| <= tol * scale.
template <typename Apply>
double power_top(int n, double scale, Apply&& apply) {
  Eigen::VectorXd v = power_start(n);
  double lambda = 0.0;
  for (int it = 0; it < kMaxPowerIters; ++it) {
    const Eigen::VectorXd w = apply(v);
    lambda = v.dot(w);
    const double residual = (w - lambda * v).norm();
    if (residual <= kResidualTol * std::max(scale, 1e-300)) return lambda;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;  // v in the kernel: top eigenvalue is 0
    v = w / norm;
  }
  throw std::runtime_error("power iteration did not converge");
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& Q) {
  require_symmetric(Q);
  const int n = static_cast<int>(Q.rows());
  const double frob = Q.norm();
  if (frob == 0.0) return 0.0;
  // ||Q||^2 is the top eigenvalue of Q^2; frob^2 bounds it.
  const double top = power_top(n, frob * frob, [&](const Eigen::VectorXd& v) {
    return (Q * (Q * v)).eval();
  });
  return std::sqrt(std::max(top, 0.0));
}

double min_eigenvalue(const Eigen::MatrixXd& Q) {
  require_symmetric(Q);
  const int n = static_cast<int>(Q.rows());
  const double s = spectral_norm(Q);
  if (s == 0.0) return 0.0;
  // s I - Q is PSD with top eigenvalue s - lambda_min.
  const double top = power_top(n, 2.0 * s, [&](const Eigen::VectorXd& v) {
    return (s * v - Q * v).eval();
  });
  return s - top;
}

BoxQP gen_boxqp(int n, double a, double b, RngStream& stream) {
  if (n < 1) throw std::invalid_argument("gen_boxqp: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gen_boxqp: requires a < b");
  Eigen::MatrixXd raw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) raw(i, j) = stream.normal();
  Eigen::MatrixXd Q = 0.5 * (raw + raw.transpose());
  Eigen::VectorXd c = stream.standard_normal(n);

  BoxQP qp{std::move(Q), std::move(c), BoxSet::cube(n, a, b)};
  qp.spectral_norm = spectral_norm(qp.Q);
  qp.lambda_min = min_eigenvalue(qp.Q);
  qp.lower_curvature = std::max(0.0, -qp.lambda_min);
  return qp;
}

}  // namespace projgrad
