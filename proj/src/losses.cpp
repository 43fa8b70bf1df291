#include "ricci/losses.hpp"

#include <cmath>

namespace ricci {

QuadraticLoss::QuadraticLoss(int dim, double condition_number) {
  if (dim < 1) throw InvalidInputError("quadratic loss needs dim >= 1");
  if (!(condition_number >= 1.0)) throw InvalidInputError("condition number must be >= 1");
  lambda_.resize(dim);
  for (int i = 0; i < dim; ++i) {
    const double t = dim == 1 ? 0.0 : static_cast<double>(i) / (dim - 1);
    lambda_[i] = 1.0 + t * (condition_number - 1.0);
  }
}

QuadraticLoss::QuadraticLoss(std::vector<double> spectrum) : lambda_(std::move(spectrum)) {
  for (double l : lambda_)
    if (!(l > 0.0)) throw InvalidInputError("quadratic spectrum must be positive");
}

double QuadraticLoss::value(const std::vector<double>& theta) const {
  double s = 0.0;
  for (size_t i = 0; i < theta.size(); ++i) s += lambda_[i] * theta[i] * theta[i];
  return 0.5 * s;
}

void QuadraticLoss::gradient(const std::vector<double>& theta, std::vector<double>& grad) const {
  grad.resize(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) grad[i] = lambda_[i] * theta[i];
}

double RosenbrockSumLoss::value(const std::vector<double>& theta) const {
  double s = 0.0;
  for (size_t i = 0; i + 1 < theta.size(); ++i) {
    const double d = theta[i + 1] - theta[i] * theta[i];
    const double e = 1.0 - theta[i];
    s += a_ * d * d + e * e;
  }
  return s;
}

void RosenbrockSumLoss::gradient(const std::vector<double>& theta,
                                 std::vector<double>& grad) const {
  grad.assign(theta.size(), 0.0);
  for (size_t i = 0; i + 1 < theta.size(); ++i) {
    const double d = theta[i + 1] - theta[i] * theta[i];
    grad[i] += -4.0 * a_ * d * theta[i] - 2.0 * (1.0 - theta[i]);
    grad[i + 1] += 2.0 * a_ * d;
  }
}

double SyntheticEmbeddingLoss::value(const std::vector<double>& theta) const {
  double s = 0.0;
  for (size_t i = 0; i < theta.size(); ++i) {
    const double d = theta[i] - target_[i];
    s += d * d;
  }
  return 0.5 * s;
}

void SyntheticEmbeddingLoss::gradient(const std::vector<double>& theta,
                                      std::vector<double>& grad) const {
  grad.resize(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) grad[i] = theta[i] - target_[i];
}

}  // namespace ricci
