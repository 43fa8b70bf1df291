#pragma once

#include <memory>
#include <vector>

#include "ricci/flow.hpp"

namespace ricci {

// L = (1/2) sum_i lambda_i theta_i^2 with spectrum linearly spaced over
// [1, condition_number]. Convex with known Hessian; the workhorse
// convergence benchmark.
class QuadraticLoss final : public LossOracle {
 public:
  QuadraticLoss(int dim, double condition_number);
  explicit QuadraticLoss(std::vector<double> spectrum);

  double value(const std::vector<double>& theta) const override;
  void gradient(const std::vector<double>& theta, std::vector<double>& grad) const override;

  const std::vector<double>& spectrum() const { return lambda_; }

 private:
  std::vector<double> lambda_;
};

// Chained Rosenbrock: sum_i a (theta_{i+1} - theta_i^2)^2 + (1 - theta_i)^2.
class RosenbrockSumLoss final : public LossOracle {
 public:
  explicit RosenbrockSumLoss(double a = 100.0) : a_(a) {}
  double value(const std::vector<double>& theta) const override;
  void gradient(const std::vector<double>& theta, std::vector<double>& grad) const override;

 private:
  double a_;
};

// L = (1/2) |theta - target|^2: pulls parameters toward stored
// embedding targets; exercises the distortion metric.
class SyntheticEmbeddingLoss final : public LossOracle {
 public:
  explicit SyntheticEmbeddingLoss(std::vector<double> targets) : target_(std::move(targets)) {}
  double value(const std::vector<double>& theta) const override;
  void gradient(const std::vector<double>& theta, std::vector<double>& grad) const override;
  const std::vector<double>& targets() const { return target_; }

 private:
  std::vector<double> target_;
};

}  // namespace ricci
