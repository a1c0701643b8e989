#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

#include "projgrad/rng.hpp"

namespace projgrad {

// Convex compact feasible set with an exact Euclidean projection and a known
// diameter. Implementations are immutable after construction and safe to
// share across threads.
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;
  virtual int dim() const = 0;
  virtual double diameter() const = 0;
  // argmin_{x in X} ||x - y||. Callers go through projgrad::project(), which
  // validates dimension and finiteness.
  virtual Eigen::VectorXd project_impl(const Eigen::VectorXd& y) const = 0;
  // Uniform draw from the set (used for initial points).
  virtual Eigen::VectorXd sample_uniform(RngStream& stream) const = 0;
};

class BoxSet final : public FeasibleSet {
 public:
  BoxSet(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static BoxSet cube(int n, double lower, double upper);

  int dim() const override { return static_cast<int>(lower_.size()); }
  double diameter() const override { return diameter_; }
  Eigen::VectorXd project_impl(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd sample_uniform(RngStream& stream) const override;

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  Eigen::VectorXd lower_, upper_;
  double diameter_;
};

class BallSet final : public FeasibleSet {
 public:
  BallSet(Eigen::VectorXd center, double radius);

  int dim() const override { return static_cast<int>(center_.size()); }
  double diameter() const override { return 2.0 * radius_; }
  Eigen::VectorXd project_impl(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd sample_uniform(RngStream& stream) const override;

  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Eigen::VectorXd center_;
  double radius_;
};

// Cartesian product of component sets over contiguous index blocks covering
// [0, n). diameter^2 = sum of component diameters^2.
class ProductSet final : public FeasibleSet {
 public:
  struct Block {
    int offset;
    std::shared_ptr<const FeasibleSet> set;
  };

  explicit ProductSet(std::vector<Block> blocks);

  int dim() const override { return dim_; }
  double diameter() const override { return diameter_; }
  Eigen::VectorXd project_impl(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd sample_uniform(RngStream& stream) const override;

  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  std::vector<Block> blocks_;
  int dim_;
  double diameter_;
};

}  // namespace projgrad
