#include "projgrad/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace projgrad {

double StochOracle::population_value(const Eigen::VectorXd&) const {
  throw std::logic_error("population_value: not available for this oracle");
}

Eigen::VectorXd StochOracle::population_gradient(const Eigen::VectorXd&) const {
  throw std::logic_error("population_gradient: not available for this oracle");
}

std::pair<double, Eigen::VectorXd> StochOracle::sample_value_grad(
    const Eigen::VectorXd& x, RngStream& stream) const {
  BatchStats s = batch_value_grad(x, 1, stream);
  return {s.value, std::move(s.grad)};
}

Eigen::VectorXd StochOracle::batch_grad(const Eigen::VectorXd& x, long b,
                                        RngStream& stream) const {
  return batch_value_grad(x, b, stream).grad;
}

double StochOracle::sample_variance(const Eigen::VectorXd& x, long m,
                                    RngStream& stream) const {
  if (m < 2) throw std::invalid_argument("sample_variance: need m >= 2");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim());
  double sq = 0.0;
  for (long i = 0; i < m; ++i) {
    const Eigen::VectorXd g = batch_grad(x, 1, stream);
    mean += g;
    sq += g.squaredNorm();
  }
  mean /= static_cast<double>(m);
  return sq / static_cast<double>(m) - mean.squaredNorm();
}

// ---------------------------------------------------------------------------
// ZeroVarianceOracle

BatchStats ZeroVarianceOracle::batch_value_grad(const Eigen::VectorXd& x,
                                                long b, RngStream&) const {
  if (b < 1) throw std::invalid_argument("batch_value_grad: b must be >= 1");
  // All samples coincide, so the batch mean is the exact evaluation.
  return {f_->value(x), f_->gradient(x)};
}

CurvatureStats ZeroVarianceOracle::curvature_pair(const Eigen::VectorXd& x_prev,
                                                  const Eigen::VectorXd& x_cur,
                                                  long b, RngStream&) const {
  if (b < 1) throw std::invalid_argument("curvature_pair: b must be >= 1");
  return {f_->value(x_prev), f_->value(x_cur), f_->gradient(x_prev)};
}

SpiderStats ZeroVarianceOracle::spider_batch(const Eigen::VectorXd& x_prev,
                                             const Eigen::VectorXd& x_cur,
                                             long b, RngStream&) const {
  if (b < 1) throw std::invalid_argument("spider_batch: b must be >= 1");
  SpiderStats s;
  s.mean_diff = f_->gradient(x_cur) - f_->gradient(x_prev);
  s.sum_sq_diff = static_cast<double>(b) * s.mean_diff.squaredNorm();
  s.batch = b;
  return s;
}

double ZeroVarianceOracle::population_value(const Eigen::VectorXd& x) const {
  return f_->value(x);
}

Eigen::VectorXd ZeroVarianceOracle::population_gradient(
    const Eigen::VectorXd& x) const {
  return f_->gradient(x);
}

// ---------------------------------------------------------------------------
// GaussianNoiseOracle

GaussianNoiseOracle::GaussianNoiseOracle(const DetOracle& f, double sigma2)
    : f_(&f), sigma2_(sigma2) {
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("GaussianNoiseOracle: sigma2 must be >= 0");
  coord_sd_ = std::sqrt(sigma2 / static_cast<double>(f.dim()));
}

BatchStats GaussianNoiseOracle::batch_value_grad(const Eigen::VectorXd& x,
                                                 long b,
                                                 RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("batch_value_grad: b must be >= 1");
  // Accumulate whole per-sample evaluations so the result is bitwise the
  // arithmetic mean of b single-sample calls on the same draws.
  const double base_val = f_->value(x);
  const Eigen::VectorXd base_grad = f_->gradient(x);
  double value_sum = 0.0;
  Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(dim());
  for (long i = 0; i < b; ++i) {
    const Eigen::VectorXd noise =
        (coord_sd_ * stream.standard_normal(dim())).eval();
    value_sum += base_val + noise.dot(x);
    grad_sum += base_grad + noise;
  }
  return {value_sum / static_cast<double>(b),
          grad_sum / static_cast<double>(b)};
}

CurvatureStats GaussianNoiseOracle::curvature_pair(const Eigen::VectorXd& x_prev,
                                                   const Eigen::VectorXd& x_cur,
                                                   long b,
                                                   RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("curvature_pair: b must be >= 1");
  Eigen::VectorXd noise_mean = Eigen::VectorXd::Zero(dim());
  for (long i = 0; i < b; ++i)
    noise_mean += coord_sd_ * stream.standard_normal(dim());
  noise_mean /= static_cast<double>(b);
  CurvatureStats s;
  s.f_prev = f_->value(x_prev) + noise_mean.dot(x_prev);
  s.f_cur = f_->value(x_cur) + noise_mean.dot(x_cur);
  s.g_prev = f_->gradient(x_prev) + noise_mean;
  return s;
}

SpiderStats GaussianNoiseOracle::spider_batch(const Eigen::VectorXd& x_prev,
                                              const Eigen::VectorXd& x_cur,
                                              long b, RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("spider_batch: b must be >= 1");
  // The linear noise term cancels in G(x_cur, xi) - G(x_prev, xi), but the
  // stream still advances once per sample so accounting stays honest.
  for (long i = 0; i < b; ++i) (void)stream.standard_normal(dim());
  SpiderStats s;
  s.mean_diff = f_->gradient(x_cur) - f_->gradient(x_prev);
  s.sum_sq_diff = static_cast<double>(b) * s.mean_diff.squaredNorm();
  s.batch = b;
  return s;
}

double GaussianNoiseOracle::population_value(const Eigen::VectorXd& x) const {
  return f_->value(x);
}

Eigen::VectorXd GaussianNoiseOracle::population_gradient(
    const Eigen::VectorXd& x) const {
  return f_->gradient(x);
}

// ---------------------------------------------------------------------------
// FiniteSumQuadratic

FiniteSumQuadratic::FiniteSumQuadratic(Eigen::MatrixXd Q, Eigen::VectorXd c,
                                       long M, double sigma2, RngStream& stream)
    : Q_(std::move(Q)), c_(std::move(c)), sigma2_(sigma2) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != c_.size())
    throw std::invalid_argument("FiniteSumQuadratic: shape mismatch");
  if (M < 2) throw std::invalid_argument("FiniteSumQuadratic: need M >= 2");
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("FiniteSumQuadratic: sigma2 must be >= 0");
  const int n = static_cast<int>(c_.size());
  offsets_ = Eigen::MatrixXd::Zero(n, M);
  if (sigma2 > 0.0) {
    for (long i = 0; i < M; ++i) offsets_.col(i) = stream.standard_normal(n);
    const Eigen::VectorXd mean = offsets_.rowwise().mean();
    offsets_.colwise() -= mean;
    const double var = offsets_.squaredNorm() / static_cast<double>(M);
    offsets_ *= std::sqrt(sigma2 / var);
  }
}

std::vector<std::int64_t> FiniteSumQuadratic::draw_indices(
    long b, RngStream& stream) const {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(b));
  for (long i = 0; i < b; ++i)
    idx[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(stream.uniform_below(
            static_cast<std::uint64_t>(size())));
  return idx;
}

BatchStats FiniteSumQuadratic::batch_value_grad(const Eigen::VectorXd& x,
                                                long b,
                                                RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("batch_value_grad: b must be >= 1");
  // Accumulate whole per-sample evaluations so the result is bitwise the
  // arithmetic mean of b single-sample calls on the same draws.
  const double base_val = 0.5 * x.dot(Q_ * x) + c_.dot(x);
  const Eigen::VectorXd base_grad = Q_ * x + c_;
  double value_sum = 0.0;
  Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(dim());
  for (const auto i : draw_indices(b, stream)) {
    value_sum += base_val + offsets_.col(i).dot(x);
    grad_sum += base_grad + offsets_.col(i);
  }
  return {value_sum / static_cast<double>(b),
          grad_sum / static_cast<double>(b)};
}

CurvatureStats FiniteSumQuadratic::curvature_pair(const Eigen::VectorXd& x_prev,
                                                  const Eigen::VectorXd& x_cur,
                                                  long b,
                                                  RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("curvature_pair: b must be >= 1");
  Eigen::VectorXd d_mean = Eigen::VectorXd::Zero(dim());
  for (const auto i : draw_indices(b, stream)) d_mean += offsets_.col(i);
  d_mean /= static_cast<double>(b);
  CurvatureStats s;
  s.f_prev = 0.5 * x_prev.dot(Q_ * x_prev) + (c_ + d_mean).dot(x_prev);
  s.f_cur = 0.5 * x_cur.dot(Q_ * x_cur) + (c_ + d_mean).dot(x_cur);
  s.g_prev = Q_ * x_prev + c_ + d_mean;
  return s;
}

SpiderStats FiniteSumQuadratic::spider_batch(const Eigen::VectorXd& x_prev,
                                             const Eigen::VectorXd& x_cur,
                                             long b, RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("spider_batch: b must be >= 1");
  // Per-sample gradients share the offset, so differences are deterministic;
  // the draws still advance the stream.
  (void)draw_indices(b, stream);
  SpiderStats s;
  s.mean_diff = Q_ * (x_cur - x_prev);
  s.sum_sq_diff = static_cast<double>(b) * s.mean_diff.squaredNorm();
  s.batch = b;
  return s;
}

double FiniteSumQuadratic::population_value(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(Q_ * x) + c_.dot(x);
}

Eigen::VectorXd FiniteSumQuadratic::population_gradient(
    const Eigen::VectorXd& x) const {
  return Q_ * x + c_;
}

}  // namespace projgrad
