#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>

#include "projgrad/oracles.hpp"
#include "projgrad/rng.hpp"
#include "projgrad/sets.hpp"

namespace projgrad {

// Semisupervised smoothed SVM over the model (x; b):
//   lambda1 E[max{0, 1 - v (u1.x + b)}^2]
//   + lambda2 E[exp(-5 (u2.x + b)^2)]
//   + (lambda3 / 2) ||x||^2,
// with x confined to a ball of radius 10 and b to [-2, 2]. Samples u are unit
// vectors.
struct SvmParams {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  double lambda3 = 1.0;
};

// Global gradient Lipschitz constant of the objective for unit-norm samples:
// 8 lambda1 + 40 lambda2 (1 + e^{-1}) + lambda3.
double svm_lipschitz(double lambda1, double lambda2, double lambda3);
double svm_lipschitz(const SvmParams& params);

// Ball(0, 10) over the first n coordinates times the interval [-2, 2] for
// the bias.
std::shared_ptr<const ProductSet> svm_feasible_set(int n);

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;  // over (x; b), dimension n+1
};

// Squared-hinge term for one labeled sample (u1, v); u1 must be unit norm
// (tolerance 1e-9). Excludes the regularizer.
LossGrad svm_labeled_loss_grad(const Eigen::VectorXd& model,
                               const Eigen::VectorXd& u1, double v,
                               double lambda1);

// Gaussian-bump term for one unlabeled sample u2; unit norm required.
LossGrad svm_unlabeled_loss_grad(const Eigen::VectorXd& model,
                                 const Eigen::VectorXd& u2, double lambda2);

// Full per-sample value and gradient for xi = (u1, v, u2), regularizer
// included (contributes (lambda3 x; 0)).
LossGrad svm_sample_value_grad(const Eigen::VectorXd& model,
                               const Eigen::VectorXd& u1, double v,
                               const Eigen::VectorXd& u2,
                               const SvmParams& params);

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SvmDataset {
  RowMatrixXd u1;         // M x n, unit rows
  Eigen::VectorXd labels; // +-1, labels[i] = sign(u1.row(i) . truth_x + truth_b)
  RowMatrixXd u2;         // M x n, unit rows
  Eigen::VectorXd truth_x;
  double truth_b = 0.0;

  long size() const { return static_cast<long>(u1.rows()); }
  int dim() const { return static_cast<int>(u1.cols()); }
};

// Two M x n unit-sphere sample sets with labels from a Gaussian ground
// truth; sign(0) counts as +1.
SvmDataset gen_svm_dataset(long M, int n, RngStream& stream);

// Binary persistence: header (magic, version, n, M), then both sample
// matrices as row-major 64-bit floats, then labels as int8.
void save_svm_dataset(const SvmDataset& data, const std::string& path);
SvmDataset load_svm_dataset(const std::string& path);

// Plain-text export for inspection: one row per sample pair.
void export_svm_dataset_csv(const SvmDataset& data, const std::string& path);

// Finite-sum oracle over a pre-generated dataset. One sample draw pairs one
// u1 row with one independently drawn u2 row; batches draw indices without
// replacement (a full-size batch is an exhaustive in-order pass), or i.i.d.
// when with_replacement is set.
class SvmFiniteSumOracle final : public StochOracle {
 public:
  SvmFiniteSumOracle(std::shared_ptr<const SvmDataset> data, SvmParams params,
                     bool with_replacement = false);

  int dim() const override;
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

  const SvmDataset& dataset() const { return *data_; }
  const SvmParams& params() const { return params_; }

 private:
  std::vector<std::int64_t> draw_indices(long b, RngStream& stream) const;

  std::shared_ptr<const SvmDataset> data_;
  SvmParams params_;
  bool with_replacement_;
};

// Online oracle: fresh unit-sphere samples on demand, labels from a Gaussian
// ground truth drawn at construction. No population access.
class SvmOnlineOracle final : public StochOracle {
 public:
  SvmOnlineOracle(int n, SvmParams params, RngStream& gen_stream);

  int dim() const override { return n_ + 1; }
  BatchStats batch_value_grad(const Eigen::VectorXd& x, long b,
                              RngStream& stream) const override;
  CurvatureStats curvature_pair(const Eigen::VectorXd& x_prev,
                                const Eigen::VectorXd& x_cur, long b,
                                RngStream& stream) const override;
  SpiderStats spider_batch(const Eigen::VectorXd& x_prev,
                           const Eigen::VectorXd& x_cur, long b,
                           RngStream& stream) const override;

  const Eigen::VectorXd& truth_x() const { return truth_x_; }
  double truth_b() const { return truth_b_; }

 private:
  int n_;
  SvmParams params_;
  Eigen::VectorXd truth_x_;
  double truth_b_;
};

}  // namespace projgrad
