#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <utility>

#include "projgrad/rng.hpp"

namespace projgrad {

// Exact first-order oracle for a smooth objective.
class DetOracle {
 public:
  virtual ~DetOracle() = default;
  virtual int dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
};

// Batch means of one i.i.d. sample set evaluated at a single point.
struct BatchStats {
  double value = 0.0;
  Eigen::VectorXd grad;
};

// Batch means of one shared sample set evaluated at two points; feeds the
// stochastic local-curvature estimator.
struct CurvatureStats {
  double f_prev = 0.0;
  double f_cur = 0.0;
  Eigen::VectorXd g_prev;
};

// One shared sample set evaluated at two points, reduced to the mean gradient
// difference and the sum of squared per-sample differences (the latter feeds
// the pairwise smoothness estimator at no extra oracle cost).
struct SpiderStats {
  Eigen::VectorXd mean_diff;  // mean over samples of G(x_cur) - G(x_prev)
  double sum_sq_diff = 0.0;   // sum over samples of ||G(x_cur) - G(x_prev)||^2
  long batch = 0;
};

// Stochastic per-sample value+gradient oracle: unbiased gradients with
// bounded variance, and (where the auto-conditioned solvers need it) a
// uniformly smooth stochastic function F(x, xi) with G = dF/dx. All batch
// operations draw their samples from the caller's stream and reduce in a
// fixed order, so runs are reproducible.
class StochOracle {
 public:
  virtual ~StochOracle() = default;
  virtual int dim() const = 0;

  // Means of b fresh samples at x.
  virtual BatchStats batch_value_grad(const Eigen::VectorXd& x, long b,
                                      RngStream& stream) const = 0;

  // Means of b fresh samples shared between x_prev and x_cur.
  virtual CurvatureStats curvature_pair(const Eigen::VectorXd& x_prev,
                                        const Eigen::VectorXd& x_cur, long b,
                                        RngStream& stream) const = 0;

  // b fresh samples shared between x_prev and x_cur, reduced for the
  // recursive variance-reduced estimator.
  virtual SpiderStats spider_batch(const Eigen::VectorXd& x_prev,
                                   const Eigen::VectorXd& x_cur, long b,
                                   RngStream& stream) const = 0;

  // Exact expectation, available in finite-sum mode; for evaluation only.
  virtual bool has_population() const { return false; }
  virtual double population_value(const Eigen::VectorXd& x) const;
  virtual Eigen::VectorXd population_gradient(const Eigen::VectorXd& x) const;

  // Single-sample draw (F(x, xi), G(x, xi)).
  std::pair<double, Eigen::VectorXd> sample_value_grad(const Eigen::VectorXd& x,
                                                       RngStream& stream) const;
  Eigen::VectorXd batch_grad(const Eigen::VectorXd& x, long b,
                             RngStream& stream) const;

  // Empirical per-sample gradient variance E||G(x,xi) - mean||^2 from m
  // draws at x.
  double sample_variance(const Eigen::VectorXd& x, long m,
                         RngStream& stream) const;
};

// Wraps a deterministic oracle as a zero-variance stochastic one: every
// sample returns the exact value and gradient. Useful for structural
// identities (a stochastic solver run must reproduce its deterministic
// counterpart exactly).
class ZeroVarianceOracle final : public StochOracle {
 public:
  explicit ZeroVarianceOracle(const DetOracle& f) : f_(&f) {}

  int dim() const override { return f_->dim(); }
  BatchStats batch_value_grad(const Eigen::VectorXd& x, long b,
                              RngStream& stream) const override;
  CurvatureStats curvature_pair(const Eigen::VectorXd& x_prev,
                                const Eigen::VectorXd& x_cur, long b,
                                RngStream& stream) const override;
  SpiderStats spider_batch(const Eigen::VectorXd& x_prev,
                           const Eigen::VectorXd& x_cur, long b,
                           RngStream& stream) const override;
  bool has_population() const override { return true; }
  double population_value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd population_gradient(const Eigen::VectorXd& x) const override;

 private:
  const DetOracle* f_;
};

// F(x, xi) = f(x) + <xi, x> with xi ~ N(0, (sigma2/n) I), so gradients are
// unbiased with E||G - grad f||^2 = sigma2 while per-sample curvature stays
// exactly that of f.
class GaussianNoiseOracle final : public StochOracle {
 public:
  GaussianNoiseOracle(const DetOracle& f, double sigma2);

  int dim() const override { return f_->dim(); }
  double sigma2() const { return sigma2_; }
  BatchStats batch_value_grad(const Eigen::VectorXd& x, long b,
                              RngStream& stream) const override;
  CurvatureStats curvature_pair(const Eigen::VectorXd& x_prev,
                                const Eigen::VectorXd& x_cur, long b,
                                RngStream& stream) const override;
  SpiderStats spider_batch(const Eigen::VectorXd& x_prev,
                           const Eigen::VectorXd& x_cur, long b,
                           RngStream& stream) const override;
  bool has_population() const override { return true; }
  double population_value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd population_gradient(const Eigen::VectorXd& x) const override;

 private:
  const DetOracle* f_;
  double sigma2_;
  double coord_sd_;
};

// Finite sum of quadratics f_i(x) = 0.5 x^T Q x + (c + d_i)^T x with the
// offsets d_i centered to mean zero, so the population gradient is exactly
// Q x + c and the per-sample gradient variance is mean_i ||d_i||^2
// (controllable at generation).
class FiniteSumQuadratic final : public StochOracle {
 public:
  // Offsets drawn Gaussian and rescaled so the per-sample variance equals
  // sigma2 exactly.
  FiniteSumQuadratic(Eigen::MatrixXd Q, Eigen::VectorXd c, long M,
                     double sigma2, RngStream& stream);

  int dim() const override { return static_cast<int>(c_.size()); }
  long size() const { return static_cast<long>(offsets_.cols()); }
  double sigma2() const { return sigma2_; }

  BatchStats batch_value_grad(const Eigen::VectorXd& x, long b,
                              RngStream& stream) const override;
  CurvatureStats curvature_pair(const Eigen::VectorXd& x_prev,
                                const Eigen::VectorXd& x_cur, long b,
                                RngStream& stream) const override;
  SpiderStats spider_batch(const Eigen::VectorXd& x_prev,
                           const Eigen::VectorXd& x_cur, long b,
                           RngStream& stream) const override;
  bool has_population() const override { return true; }
  double population_value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd population_gradient(const Eigen::VectorXd& x) const override;

 private:
  std::vector<std::int64_t> draw_indices(long b, RngStream& stream) const;

  Eigen::MatrixXd Q_;
  Eigen::VectorXd c_;
  Eigen::MatrixXd offsets_;  // n x M, column i = d_i
  double sigma2_;
};

}  // namespace projgrad
