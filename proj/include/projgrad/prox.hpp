#pragma once

#include <Eigen/Core>

#include "projgrad/sets.hpp"

namespace projgrad {

// Projected gradient mapping gamma * (x - x_plus), where x_plus is the
// prox-mapping minimizer. value is always reconstructible as
// gamma * (x - x_plus).
struct ProjGrad {
  Eigen::VectorXd value;
  Eigen::VectorXd x_plus;
  double gamma = 0.0;
};

bool all_finite(const Eigen::VectorXd& v);
void require_finite(const Eigen::VectorXd& v, const char* what);

// Exact Euclidean projection onto the set; validates dimension and
// finiteness of y.
Eigen::VectorXd project(const FeasibleSet& set, const Eigen::VectorXd& y);

// argmin_{u in X} <g, u> + (gamma/2) ||x - u||^2, computed as the projection
// of the gradient step x - g/gamma. Requires gamma > 0.
Eigen::VectorXd prox_step(const FeasibleSet& set, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& g, double gamma);

// The mapping gamma * (x - x_plus); reduces to g when the gradient step stays
// strictly interior.
ProjGrad projected_gradient(const FeasibleSet& set, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& g, double gamma);

// Local smoothness estimator between x and y:
//   2 (f(y) - f(x) - <grad_x, y - x>) / ||y - x||^2.
// Signed; returns 0 when the displacement is (numerically) zero, following
// the 0/0 = 0 convention. Displacements with ||y-x||^2 below 1e-30, and
// Bregman gaps smaller than the rounding noise of the inputs, count as the
// 0/0 case; both guards keep cancellation from masquerading as curvature.
double local_curvature(double f_x, double f_y, const Eigen::VectorXd& grad_x,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace projgrad
