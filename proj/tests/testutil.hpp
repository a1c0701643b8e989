#pragma once

// Independent reference implementations used as test oracles. These must not
// share code paths with the library routines they check.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "projgrad/oracles.hpp"
#include "projgrad/rng.hpp"

namespace testutil {

// Full eigenvalue set of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd A,
                                              int sweeps = 100) {
  const int n = static_cast<int>(A.rows());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = A(i, i);
  return eig;
}

// Central finite-difference gradient of a scalar function.
inline Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + step;
    xm[i] = x[i] - step;
    g[i] = (f(xp) - f(xm)) / (2.0 * step);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

// Brute-force minimizer of <g,u> + (gamma/2)||x-u||^2 over a 2-D grid of the
// given resolution; `inside` filters grid points (e.g. a disk). For curved
// feasible sets the square lattice under-covers the boundary, so extra
// candidate points (a boundary discretization at the same resolution) can be
// supplied and are enumerated alongside.
inline Eigen::Vector2d grid_prox_2d(
    const Eigen::Vector2d& x, const Eigen::Vector2d& g, double gamma,
    double lo, double hi, double resolution,
    const std::function<bool(double, double)>& inside,
    const std::vector<Eigen::Vector2d>& boundary = {}) {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d arg = Eigen::Vector2d::Zero();
  auto consider = [&](double u0, double u1) {
    const double d0 = x[0] - u0, d1 = x[1] - u1;
    const double val =
        g[0] * u0 + g[1] * u1 + 0.5 * gamma * (d0 * d0 + d1 * d1);
    if (val < best) {
      best = val;
      arg << u0, u1;
    }
  };
  const long steps = std::lround((hi - lo) / resolution);
  for (long i = 0; i <= steps; ++i) {
    const double u0 = lo + resolution * static_cast<double>(i);
    for (long j = 0; j <= steps; ++j) {
      const double u1 = lo + resolution * static_cast<double>(j);
      if (!inside(u0, u1)) continue;
      consider(u0, u1);
    }
  }
  for (const auto& p : boundary) consider(p[0], p[1]);
  if (!std::isfinite(best))
    throw std::runtime_error("grid_prox_2d: no feasible grid point");
  return arg;
}

// Circle discretized at the given arc resolution, for use as grid_prox_2d
// boundary candidates.
inline std::vector<Eigen::Vector2d> circle_points(double radius,
                                                  double resolution) {
  const long n = std::lround(2.0 * M_PI * radius / resolution);
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    out.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
  }
  return out;
}

// Pearson chi-square statistic for observed counts against expected
// probabilities.
inline double chi_square_stat(const std::vector<long>& counts,
                              const std::vector<double>& probs, long total) {
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(total);
    const double d = static_cast<double>(counts[i]) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Upper 0.001 quantiles of the chi-square distribution by degrees of
// freedom (frozen reference values).
inline double chi_square_crit_999(int df) {
  switch (df) {
    case 1: return 10.827566170662733;
    case 2: return 13.815510557964274;
    case 3: return 16.26623619623813;
    case 4: return 18.46682695290317;
    case 5: return 20.515005652432873;
    case 9: return 27.877164871256568;
    default: throw std::invalid_argument("chi_square_crit_999: df not tabulated");
  }
}

// Simple quadratic objective 0.5 x^T Q x + c^T x for deterministic tests.
class QuadOracle final : public projgrad::DetOracle {
 public:
  QuadOracle(Eigen::MatrixXd Q, Eigen::VectorXd c)
      : Q_(std::move(Q)), c_(std::move(c)) {}
  int dim() const override { return static_cast<int>(c_.size()); }
  double value(const Eigen::VectorXd& x) const override {
    return 0.5 * x.dot(Q_ * x) + c_.dot(x);
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    return Q_ * x + c_;
  }
  const Eigen::MatrixXd& Q() const { return Q_; }

 private:
  Eigen::MatrixXd Q_;
  Eigen::VectorXd c_;
};

// Stochastic wrapper whose samples scale the whole function by a random
// factor with mean 1: F(x, xi) = a_xi f(x). Gradients stay unbiased and the
// per-sample curvature a_xi L_t is genuinely noisy, unlike linear-noise
// wrappers.
class ScaleJitterOracle final : public projgrad::StochOracle {
 public:
  ScaleJitterOracle(const projgrad::DetOracle& f, double jitter)
      : f_(&f), jitter_(jitter) {
    if (jitter < 0.0 || jitter >= 1.0)
      throw std::invalid_argument("ScaleJitterOracle: jitter in [0, 1)");
  }

  int dim() const override { return f_->dim(); }

  projgrad::BatchStats batch_value_grad(const Eigen::VectorXd& x, long b,
                                        projgrad::RngStream& s) const override {
    const double a = mean_scale(b, s);
    return {a * f_->value(x), a * f_->gradient(x)};
  }

  projgrad::CurvatureStats curvature_pair(const Eigen::VectorXd& xp,
                                          const Eigen::VectorXd& xc, long b,
                                          projgrad::RngStream& s) const override {
    const double a = mean_scale(b, s);
    return {a * f_->value(xp), a * f_->value(xc), a * f_->gradient(xp)};
  }

  projgrad::SpiderStats spider_batch(const Eigen::VectorXd& xp,
                                     const Eigen::VectorXd& xc, long b,
                                     projgrad::RngStream& s) const override {
    projgrad::SpiderStats out;
    const Eigen::VectorXd d = f_->gradient(xc) - f_->gradient(xp);
    out.mean_diff = Eigen::VectorXd::Zero(dim());
    for (long i = 0; i < b; ++i) {
      const double a = scale(s);
      out.mean_diff += a * d;
      out.sum_sq_diff += a * a * d.squaredNorm();
    }
    out.mean_diff /= static_cast<double>(b);
    out.batch = b;
    return out;
  }

  bool has_population() const override { return true; }
  double population_value(const Eigen::VectorXd& x) const override {
    return f_->value(x);
  }
  Eigen::VectorXd population_gradient(const Eigen::VectorXd& x) const override {
    return f_->gradient(x);
  }

 private:
  double scale(projgrad::RngStream& s) const {
    return 1.0 + jitter_ * (2.0 * s.uniform01() - 1.0);
  }
  double mean_scale(long b, projgrad::RngStream& s) const {
    double sum = 0.0;
    for (long i = 0; i < b; ++i) sum += scale(s);
    return sum / static_cast<double>(b);
  }

  const projgrad::DetOracle* f_;
  double jitter_;
};

}  // namespace testutil
