#include "projgrad/sets.hpp"

#include <cmath>
#include <stdexcept>

#include "projgrad/prox.hpp"

namespace projgrad {

BoxSet::BoxSet(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size())
    throw std::invalid_argument("BoxSet: bound dimensions differ");
  if (lower_.size() == 0) throw std::invalid_argument("BoxSet: empty bounds");
  require_finite(lower_, "BoxSet lower");
  require_finite(upper_, "BoxSet upper");
  if ((lower_.array() > upper_.array()).any())
    throw std::invalid_argument("BoxSet: lower > upper in some coordinate");
  diameter_ = (upper_ - lower_).norm();
}

BoxSet BoxSet::cube(int n, double lower, double upper) {
  return BoxSet(Eigen::VectorXd::Constant(n, lower),
                Eigen::VectorXd::Constant(n, upper));
}

Eigen::VectorXd BoxSet::project_impl(const Eigen::VectorXd& y) const {
  return y.cwiseMax(lower_).cwiseMin(upper_);
}

Eigen::VectorXd BoxSet::sample_uniform(RngStream& stream) const {
  Eigen::VectorXd out(lower_.size());
  for (int i = 0; i < lower_.size(); ++i)
    out[i] = lower_[i] + (upper_[i] - lower_[i]) * stream.uniform01();
  return out;
}

BallSet::BallSet(Eigen::VectorXd center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (center_.size() == 0) throw std::invalid_argument("BallSet: empty center");
  require_finite(center_, "BallSet center");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw std::invalid_argument("BallSet: radius must be positive and finite");
}

Eigen::VectorXd BallSet::project_impl(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd d = y - center_;
  const double norm = d.norm();
  if (norm <= radius_) return y;
  return center_ + d * (radius_ / norm);
}

Eigen::VectorXd BallSet::sample_uniform(RngStream& stream) const {
  const int n = dim();
  const Eigen::VectorXd dir = stream.unit_sphere(n);
  const double r = radius_ * std::pow(stream.uniform01(), 1.0 / n);
  return center_ + r * dir;
}

ProductSet::ProductSet(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("ProductSet: no blocks");
  int expected = 0;
  double diam_sq = 0.0;
  for (const auto& b : blocks_) {
    if (!b.set) throw std::invalid_argument("ProductSet: null component");
    if (b.offset != expected)
      throw std::invalid_argument(
          "ProductSet: blocks must be contiguous and cover [0, n)");
    expected += b.set->dim();
    diam_sq += b.set->diameter() * b.set->diameter();
  }
  dim_ = expected;
  diameter_ = std::sqrt(diam_sq);
}

Eigen::VectorXd ProductSet::project_impl(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(dim_);
  for (const auto& b : blocks_) {
    const int d = b.set->dim();
    out.segment(b.offset, d) = b.set->project_impl(y.segment(b.offset, d));
  }
  return out;
}

Eigen::VectorXd ProductSet::sample_uniform(RngStream& stream) const {
  Eigen::VectorXd out(dim_);
  for (const auto& b : blocks_)
    out.segment(b.offset, b.set->dim()) = b.set->sample_uniform(stream);
  return out;
}

}  // namespace projgrad
