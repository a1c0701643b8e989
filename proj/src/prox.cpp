#include "projgrad/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace projgrad {

bool all_finite(const Eigen::VectorXd& v) {
  return v.allFinite();
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

Eigen::VectorXd project(const FeasibleSet& set, const Eigen::VectorXd& y) {
  if (y.size() != set.dim())
    throw std::invalid_argument("project: dimension mismatch");
  require_finite(y, "project input");
  return set.project_impl(y);
}

Eigen::VectorXd prox_step(const FeasibleSet& set, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& g, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("prox_step: gamma must be positive");
  if (x.size() != g.size())
    throw std::invalid_argument("prox_step: x and g dimensions differ");
  return project(set, x - g / gamma);
}

ProjGrad projected_gradient(const FeasibleSet& set, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& g, double gamma) {
  ProjGrad out;
  out.x_plus = prox_step(set, x, g, gamma);
  out.value = gamma * (x - out.x_plus);
  out.gamma = gamma;
  return out;
}

double local_curvature(double f_x, double f_y, const Eigen::VectorXd& grad_x,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (!std::isfinite(f_x) || !std::isfinite(f_y))
    throw std::invalid_argument("local_curvature: non-finite function values");
  if (grad_x.size() != x.size() || x.size() != y.size())
    throw std::invalid_argument("local_curvature: dimension mismatch");
  require_finite(grad_x, "local_curvature gradient");
  require_finite(x, "local_curvature x");
  require_finite(y, "local_curvature y");
  const Eigen::VectorXd d = y - x;
  const double dist_sq = d.squaredNorm();
  if (dist_sq < 1e-30) return 0.0;
  const double inner = grad_x.dot(d);
  const double numerator = f_y - f_x - inner;
  // A Bregman gap below the rounding noise of its inputs carries no
  // curvature information; treat it as the 0/0 case as well.
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(f_x) + std::abs(f_y) + std::abs(inner));
  if (std::abs(numerator) <= noise) return 0.0;
  return 2.0 * numerator / dist_sq;
}

}  // namespace projgrad
