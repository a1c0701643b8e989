#include "projgrad/problems/svm.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "projgrad/prox.hpp"

namespace projgrad {

namespace {

constexpr char kMagic[8] = {'S', 'V', 'M', 'D', 'S', 'E', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void require_unit(const Eigen::VectorXd& u, const char* what) {
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": sample must be unit norm");
}

double sign_plus(double z) { return z >= 0.0 ? 1.0 : -1.0; }

// Accumulators for one sample pair evaluated at one model point. grad_x and
// grad_b collect the un-regularized per-sample gradient.
struct PairEval {
  double loss = 0.0;
  Eigen::VectorXd grad_x;
  double grad_b = 0.0;
};

template <typename Row>
void add_labeled(const Eigen::VectorXd& x, double b, const Row& u1, double v,
                 double lambda1, PairEval& out) {
  const double margin = 1.0 - v * (u1.dot(x) + b);
  if (margin > 0.0) {
    out.loss += lambda1 * margin * margin;
    const double coef = -2.0 * lambda1 * margin * v;
    out.grad_x += coef * u1.transpose();
    out.grad_b += coef;
  }
}

template <typename Row>
void add_unlabeled(const Eigen::VectorXd& x, double b, const Row& u2,
                   double lambda2, PairEval& out) {
  const double z = u2.dot(x) + b;
  const double e = std::exp(-5.0 * z * z);
  out.loss += lambda2 * e;
  const double coef = -10.0 * lambda2 * z * e;
  out.grad_x += coef * u2.transpose();
  out.grad_b += coef;
}

struct ModelView {
  Eigen::VectorXd x;
  double b;
};

ModelView split_model(const Eigen::VectorXd& model) {
  if (model.size() < 2)
    throw std::invalid_argument("svm: model must hold (x; b)");
  const int n = static_cast<int>(model.size()) - 1;
  return {model.head(n), model[n]};
}

}  // namespace

double svm_lipschitz(double lambda1, double lambda2, double lambda3) {
  if (lambda1 < 0.0 || lambda2 < 0.0 || lambda3 < 0.0)
    throw std::invalid_argument("svm_lipschitz: lambdas must be >= 0");
  return 8.0 * lambda1 + 40.0 * lambda2 * (1.0 + std::exp(-1.0)) + lambda3;
}

double svm_lipschitz(const SvmParams& params) {
  return svm_lipschitz(params.lambda1, params.lambda2, params.lambda3);
}

std::shared_ptr<const ProductSet> svm_feasible_set(int n) {
  std::vector<ProductSet::Block> blocks;
  blocks.push_back(
      {0, std::make_shared<BallSet>(Eigen::VectorXd::Zero(n), 10.0)});
  blocks.push_back({n, std::make_shared<BoxSet>(BoxSet::cube(1, -2.0, 2.0))});
  return std::make_shared<ProductSet>(std::move(blocks));
}

LossGrad svm_labeled_loss_grad(const Eigen::VectorXd& model,
                               const Eigen::VectorXd& u1, double v,
                               double lambda1) {
  require_unit(u1, "svm_labeled_loss_grad");
  const ModelView m = split_model(model);
  PairEval acc;
  acc.grad_x = Eigen::VectorXd::Zero(m.x.size());
  add_labeled(m.x, m.b, u1, v, lambda1, acc);
  LossGrad out;
  out.loss = acc.loss;
  out.grad.resize(model.size());
  out.grad << acc.grad_x, acc.grad_b;
  return out;
}

LossGrad svm_unlabeled_loss_grad(const Eigen::VectorXd& model,
                                 const Eigen::VectorXd& u2, double lambda2) {
  require_unit(u2, "svm_unlabeled_loss_grad");
  const ModelView m = split_model(model);
  PairEval acc;
  acc.grad_x = Eigen::VectorXd::Zero(m.x.size());
  add_unlabeled(m.x, m.b, u2, lambda2, acc);
  LossGrad out;
  out.loss = acc.loss;
  out.grad.resize(model.size());
  out.grad << acc.grad_x, acc.grad_b;
  return out;
}

LossGrad svm_sample_value_grad(const Eigen::VectorXd& model,
                               const Eigen::VectorXd& u1, double v,
                               const Eigen::VectorXd& u2,
                               const SvmParams& params) {
  require_unit(u1, "svm_sample_value_grad u1");
  require_unit(u2, "svm_sample_value_grad u2");
  const ModelView m = split_model(model);
  PairEval acc;
  acc.grad_x = Eigen::VectorXd::Zero(m.x.size());
  add_labeled(m.x, m.b, u1, v, params.lambda1, acc);
  add_unlabeled(m.x, m.b, u2, params.lambda2, acc);
  LossGrad out;
  out.loss = acc.loss + 0.5 * params.lambda3 * m.x.squaredNorm();
  out.grad.resize(model.size());
  out.grad << acc.grad_x + params.lambda3 * m.x, acc.grad_b;
  return out;
}

SvmDataset gen_svm_dataset(long M, int n, RngStream& stream) {
  if (M < 1) throw std::invalid_argument("gen_svm_dataset: M must be >= 1");
  if (n < 1) throw std::invalid_argument("gen_svm_dataset: n must be >= 1");
  SvmDataset data;
  data.truth_x = stream.standard_normal(n);
  data.truth_b = stream.normal();
  data.u1.resize(M, n);
  data.u2.resize(M, n);
  data.labels.resize(M);
  for (long i = 0; i < M; ++i) {
    data.u1.row(i) = stream.unit_sphere(n).transpose();
    data.labels[i] = sign_plus(data.u1.row(i).dot(data.truth_x) + data.truth_b);
  }
  for (long i = 0; i < M; ++i)
    data.u2.row(i) = stream.unit_sphere(n).transpose();
  return data;
}

void save_svm_dataset(const SvmDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_svm_dataset: cannot open " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(data.dim());
  const std::uint64_t M = static_cast<std::uint64_t>(data.size());
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&M), sizeof(M));
  out.write(reinterpret_cast<const char*>(data.u1.data()),
            static_cast<std::streamsize>(sizeof(double) * M * n));
  out.write(reinterpret_cast<const char*>(data.u2.data()),
            static_cast<std::streamsize>(sizeof(double) * M * n));
  for (long i = 0; i < data.size(); ++i) {
    const std::int8_t v = data.labels[i] >= 0.0 ? 1 : -1;
    out.write(reinterpret_cast<const char*>(&v), 1);
  }
  if (!out) throw std::runtime_error("save_svm_dataset: write failed");
}

SvmDataset load_svm_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_svm_dataset: cannot open " + path);
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t n = 0, M = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&M), sizeof(M));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_svm_dataset: bad header in " + path);
  if (version != kVersion)
    throw std::runtime_error("load_svm_dataset: unsupported version");
  SvmDataset data;
  data.u1.resize(static_cast<long>(M), static_cast<long>(n));
  data.u2.resize(static_cast<long>(M), static_cast<long>(n));
  data.labels.resize(static_cast<long>(M));
  in.read(reinterpret_cast<char*>(data.u1.data()),
          static_cast<std::streamsize>(sizeof(double) * M * n));
  in.read(reinterpret_cast<char*>(data.u2.data()),
          static_cast<std::streamsize>(sizeof(double) * M * n));
  for (std::uint64_t i = 0; i < M; ++i) {
    std::int8_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 1);
    data.labels[static_cast<long>(i)] = static_cast<double>(v);
  }
  if (!in) throw std::runtime_error("load_svm_dataset: truncated file");
  data.truth_x = Eigen::VectorXd();  // ground truth is not persisted
  data.truth_b = 0.0;
  return data;
}

void export_svm_dataset_csv(const SvmDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("export_svm_dataset_csv: cannot open " + path);
  const int n = data.dim();
  out << "label";
  for (int j = 0; j < n; ++j) out << ",u1_" << j;
  for (int j = 0; j < n; ++j) out << ",u2_" << j;
  out << "\n";
  char buf[32];
  for (long i = 0; i < data.size(); ++i) {
    out << (data.labels[i] >= 0.0 ? 1 : -1);
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", data.u1(i, j));
      out << buf;
    }
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", data.u2(i, j));
      out << buf;
    }
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// SvmFiniteSumOracle

SvmFiniteSumOracle::SvmFiniteSumOracle(std::shared_ptr<const SvmDataset> data,
                                       SvmParams params, bool with_replacement)
    : data_(std::move(data)),
      params_(params),
      with_replacement_(with_replacement) {
  if (!data_) throw std::invalid_argument("SvmFiniteSumOracle: null dataset");
}

int SvmFiniteSumOracle::dim() const { return data_->dim() + 1; }

std::vector<std::int64_t> SvmFiniteSumOracle::draw_indices(
    long b, RngStream& stream) const {
  const long M = data_->size();
  if (with_replacement_) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(b));
    for (long i = 0; i < b; ++i)
      idx[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
          stream.uniform_below(static_cast<std::uint64_t>(M)));
    return idx;
  }
  if (b > M)
    throw std::invalid_argument(
        "SvmFiniteSumOracle: batch exceeds dataset size (without replacement)");
  if (b == M) {
    // Exhaustive pass in dataset order; matches the population exactly.
    std::vector<std::int64_t> idx(static_cast<std::size_t>(M));
    for (long i = 0; i < M; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
  }
  return stream.sample_without_replacement(M, b);
}

BatchStats SvmFiniteSumOracle::batch_value_grad(const Eigen::VectorXd& model,
                                                long b,
                                                RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("batch_value_grad: b must be >= 1");
  const ModelView m = split_model(model);
  const auto idx1 = draw_indices(b, stream);
  const auto idx2 = draw_indices(b, stream);
  PairEval acc;
  acc.grad_x = Eigen::VectorXd::Zero(m.x.size());
  for (long i = 0; i < b; ++i) {
    const auto i1 = idx1[static_cast<std::size_t>(i)];
    const auto i2 = idx2[static_cast<std::size_t>(i)];
    add_labeled(m.x, m.b, data_->u1.row(i1), data_->labels[i1],
                params_.lambda1, acc);
    add_unlabeled(m.x, m.b, data_->u2.row(i2), params_.lambda2, acc);
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  BatchStats out;
  out.value = acc.loss * inv_b + 0.5 * params_.lambda3 * m.x.squaredNorm();
  out.grad.resize(model.size());
  out.grad << acc.grad_x * inv_b + params_.lambda3 * m.x, acc.grad_b * inv_b;
  return out;
}

CurvatureStats SvmFiniteSumOracle::curvature_pair(const Eigen::VectorXd& prev,
                                                  const Eigen::VectorXd& cur,
                                                  long b,
                                                  RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("curvature_pair: b must be >= 1");
  const ModelView mp = split_model(prev);
  const ModelView mc = split_model(cur);
  const auto idx1 = draw_indices(b, stream);
  const auto idx2 = draw_indices(b, stream);
  PairEval at_prev, at_cur;
  at_prev.grad_x = Eigen::VectorXd::Zero(mp.x.size());
  at_cur.grad_x = Eigen::VectorXd::Zero(mc.x.size());
  for (long i = 0; i < b; ++i) {
    const auto i1 = idx1[static_cast<std::size_t>(i)];
    const auto i2 = idx2[static_cast<std::size_t>(i)];
    add_labeled(mp.x, mp.b, data_->u1.row(i1), data_->labels[i1],
                params_.lambda1, at_prev);
    add_unlabeled(mp.x, mp.b, data_->u2.row(i2), params_.lambda2, at_prev);
    add_labeled(mc.x, mc.b, data_->u1.row(i1), data_->labels[i1],
                params_.lambda1, at_cur);
    add_unlabeled(mc.x, mc.b, data_->u2.row(i2), params_.lambda2, at_cur);
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  CurvatureStats out;
  out.f_prev =
      at_prev.loss * inv_b + 0.5 * params_.lambda3 * mp.x.squaredNorm();
  out.f_cur = at_cur.loss * inv_b + 0.5 * params_.lambda3 * mc.x.squaredNorm();
  out.g_prev.resize(prev.size());
  out.g_prev << at_prev.grad_x * inv_b + params_.lambda3 * mp.x,
      at_prev.grad_b * inv_b;
  return out;
}

SpiderStats SvmFiniteSumOracle::spider_batch(const Eigen::VectorXd& prev,
                                             const Eigen::VectorXd& cur,
                                             long b, RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("spider_batch: b must be >= 1");
  const ModelView mp = split_model(prev);
  const ModelView mc = split_model(cur);
  const auto idx1 = draw_indices(b, stream);
  const auto idx2 = draw_indices(b, stream);
  const int n = data_->dim();
  SpiderStats out;
  out.mean_diff = Eigen::VectorXd::Zero(n + 1);
  out.batch = b;
  const Eigen::VectorXd reg_diff = params_.lambda3 * (mc.x - mp.x);
  Eigen::VectorXd diff(n + 1);
  for (long i = 0; i < b; ++i) {
    const auto i1 = idx1[static_cast<std::size_t>(i)];
    const auto i2 = idx2[static_cast<std::size_t>(i)];
    PairEval at_prev, at_cur;
    at_prev.grad_x = Eigen::VectorXd::Zero(n);
    at_cur.grad_x = Eigen::VectorXd::Zero(n);
    add_labeled(mp.x, mp.b, data_->u1.row(i1), data_->labels[i1],
                params_.lambda1, at_prev);
    add_unlabeled(mp.x, mp.b, data_->u2.row(i2), params_.lambda2, at_prev);
    add_labeled(mc.x, mc.b, data_->u1.row(i1), data_->labels[i1],
                params_.lambda1, at_cur);
    add_unlabeled(mc.x, mc.b, data_->u2.row(i2), params_.lambda2, at_cur);
    diff.head(n) = at_cur.grad_x - at_prev.grad_x + reg_diff;
    diff[n] = at_cur.grad_b - at_prev.grad_b;
    out.mean_diff += diff;
    out.sum_sq_diff += diff.squaredNorm();
  }
  out.mean_diff /= static_cast<double>(b);
  return out;
}

double SvmFiniteSumOracle::population_value(const Eigen::VectorXd& model) const {
  const ModelView m = split_model(model);
  const long M = data_->size();
  double loss1 = 0.0, loss2 = 0.0;
  for (long i = 0; i < M; ++i) {
    const double margin =
        1.0 - data_->labels[i] * (data_->u1.row(i).dot(m.x) + m.b);
    if (margin > 0.0) loss1 += margin * margin;
    const double z = data_->u2.row(i).dot(m.x) + m.b;
    loss2 += std::exp(-5.0 * z * z);
  }
  const double inv_M = 1.0 / static_cast<double>(M);
  return params_.lambda1 * loss1 * inv_M + params_.lambda2 * loss2 * inv_M +
         0.5 * params_.lambda3 * m.x.squaredNorm();
}

Eigen::VectorXd SvmFiniteSumOracle::population_gradient(
    const Eigen::VectorXd& model) const {
  const ModelView m = split_model(model);
  const long M = data_->size();
  PairEval acc;
  acc.grad_x = Eigen::VectorXd::Zero(m.x.size());
  for (long i = 0; i < M; ++i) {
    add_labeled(m.x, m.b, data_->u1.row(i), data_->labels[i], params_.lambda1,
                acc);
    add_unlabeled(m.x, m.b, data_->u2.row(i), params_.lambda2, acc);
  }
  const double inv_M = 1.0 / static_cast<double>(M);
  Eigen::VectorXd out(model.size());
  out << acc.grad_x * inv_M + params_.lambda3 * m.x, acc.grad_b * inv_M;
  return out;
}

// ---------------------------------------------------------------------------
// SvmOnlineOracle

SvmOnlineOracle::SvmOnlineOracle(int n, SvmParams params, RngStream& gen_stream)
    : n_(n), params_(params) {
  if (n < 1) throw std::invalid_argument("SvmOnlineOracle: n must be >= 1");
  truth_x_ = gen_stream.standard_normal(n);
  truth_b_ = gen_stream.normal();
}

BatchStats SvmOnlineOracle::batch_value_grad(const Eigen::VectorXd& model,
                                             long b, RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("batch_value_grad: b must be >= 1");
  const ModelView m = split_model(model);
  PairEval acc;
  acc.grad_x = Eigen::VectorXd::Zero(n_);
  for (long i = 0; i < b; ++i) {
    const Eigen::VectorXd u1 = stream.unit_sphere(n_);
    const double v = sign_plus(u1.dot(truth_x_) + truth_b_);
    const Eigen::VectorXd u2 = stream.unit_sphere(n_);
    add_labeled(m.x, m.b, u1, v, params_.lambda1, acc);
    add_unlabeled(m.x, m.b, u2, params_.lambda2, acc);
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  BatchStats out;
  out.value = acc.loss * inv_b + 0.5 * params_.lambda3 * m.x.squaredNorm();
  out.grad.resize(model.size());
  out.grad << acc.grad_x * inv_b + params_.lambda3 * m.x, acc.grad_b * inv_b;
  return out;
}

CurvatureStats SvmOnlineOracle::curvature_pair(const Eigen::VectorXd& prev,
                                               const Eigen::VectorXd& cur,
                                               long b,
                                               RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("curvature_pair: b must be >= 1");
  const ModelView mp = split_model(prev);
  const ModelView mc = split_model(cur);
  PairEval at_prev, at_cur;
  at_prev.grad_x = Eigen::VectorXd::Zero(n_);
  at_cur.grad_x = Eigen::VectorXd::Zero(n_);
  for (long i = 0; i < b; ++i) {
    const Eigen::VectorXd u1 = stream.unit_sphere(n_);
    const double v = sign_plus(u1.dot(truth_x_) + truth_b_);
    const Eigen::VectorXd u2 = stream.unit_sphere(n_);
    add_labeled(mp.x, mp.b, u1, v, params_.lambda1, at_prev);
    add_unlabeled(mp.x, mp.b, u2, params_.lambda2, at_prev);
    add_labeled(mc.x, mc.b, u1, v, params_.lambda1, at_cur);
    add_unlabeled(mc.x, mc.b, u2, params_.lambda2, at_cur);
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  CurvatureStats out;
  out.f_prev =
      at_prev.loss * inv_b + 0.5 * params_.lambda3 * mp.x.squaredNorm();
  out.f_cur = at_cur.loss * inv_b + 0.5 * params_.lambda3 * mc.x.squaredNorm();
  out.g_prev.resize(prev.size());
  out.g_prev << at_prev.grad_x * inv_b + params_.lambda3 * mp.x,
      at_prev.grad_b * inv_b;
  return out;
}

SpiderStats SvmOnlineOracle::spider_batch(const Eigen::VectorXd& prev,
                                          const Eigen::VectorXd& cur, long b,
                                          RngStream& stream) const {
  if (b < 1) throw std::invalid_argument("spider_batch: b must be >= 1");
  const ModelView mp = split_model(prev);
  const ModelView mc = split_model(cur);
  SpiderStats out;
  out.mean_diff = Eigen::VectorXd::Zero(n_ + 1);
  out.batch = b;
  const Eigen::VectorXd reg_diff = params_.lambda3 * (mc.x - mp.x);
  Eigen::VectorXd diff(n_ + 1);
  for (long i = 0; i < b; ++i) {
    const Eigen::VectorXd u1 = stream.unit_sphere(n_);
    const double v = sign_plus(u1.dot(truth_x_) + truth_b_);
    const Eigen::VectorXd u2 = stream.unit_sphere(n_);
    PairEval at_prev, at_cur;
    at_prev.grad_x = Eigen::VectorXd::Zero(n_);
    at_cur.grad_x = Eigen::VectorXd::Zero(n_);
    add_labeled(mp.x, mp.b, u1, v, params_.lambda1, at_prev);
    add_unlabeled(mp.x, mp.b, u2, params_.lambda2, at_prev);
    add_labeled(mc.x, mc.b, u1, v, params_.lambda1, at_cur);
    add_unlabeled(mc.x, mc.b, u2, params_.lambda2, at_cur);
    diff.head(n_) = at_cur.grad_x - at_prev.grad_x + reg_diff;
    diff[n_] = at_cur.grad_b - at_prev.grad_b;
    out.mean_diff += diff;
    out.sum_sq_diff += diff.squaredNorm();
  }
  out.mean_diff /= static_cast<double>(b);
  return out;
}

}  // namespace projgrad
