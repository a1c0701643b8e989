#pragma once

#include <Eigen/Core>

#include "projgrad/oracles.hpp"
#include "projgrad/rng.hpp"
#include "projgrad/sets.hpp"

namespace projgrad {

// Box-constrained quadratic program f(x) = 0.5 x^T Q x + c^T x over
// [lower, upper]^n, with the curvature constants cached at generation.
struct BoxQP {
  Eigen::MatrixXd Q;  // symmetric
  Eigen::VectorXd c;
  BoxSet box;
  double spectral_norm = 0.0;    // ||Q||
  double lambda_min = 0.0;       // smallest eigenvalue of Q
  double lower_curvature = 0.0;  // max(0, -lambda_min)
};

// Largest absolute eigenvalue of a symmetric matrix via power iteration on
// Q^2, relative accuracy 1e-8 (residual-checked); throws after 1e5 iterations
// without convergence.
double spectral_norm(const Eigen::MatrixXd& Q);

// Smallest eigenvalue via shifted power iteration on ||Q|| I - Q.
double min_eigenvalue(const Eigen::MatrixXd& Q);

// Q = (Qt + Qt^T)/2 with i.i.d. standard Gaussian Qt, Gaussian c, box
// [a, b]^n.
BoxQP gen_boxqp(int n, double a, double b, RngStream& stream);

// First-order oracle for a BoxQP instance (borrows the instance).
class BoxQPOracle final : public DetOracle {
 public:
  explicit BoxQPOracle(const BoxQP& qp) : qp_(&qp) {}
  int dim() const override { return static_cast<int>(qp_->c.size()); }
  double value(const Eigen::VectorXd& x) const override {
    return 0.5 * x.dot(qp_->Q * x) + qp_->c.dot(x);
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    return qp_->Q * x + qp_->c;
  }

 private:
  const BoxQP* qp_;
};

}  // namespace projgrad
