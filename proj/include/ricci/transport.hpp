#pragma once

#include <Eigen/Core>

#include "ricci/errors.hpp"
#include "ricci/graph.hpp"

namespace ricci {

// Wasserstein-1 instance between two vertex measures. cost(a, b) is the
// ground distance between mu.support[a] and nu.support[b].
struct TransportProblem {
  VertexMeasure mu;
  VertexMeasure nu;
  Eigen::MatrixXd cost;
  double epsilon = 0.0;   // entropic regularization; > 0 for sinkhorn_w1
  int max_iter = 10000;
  double tol = 1e-9;      // L1 marginal violation threshold

  void validate() const;
};

// Entropically regularized W1 via log-domain Sinkhorn. Returns the
// transport cost <pi, cost> of the converged plan. Throws
// TransportConvergenceError (carrying the final marginal violation) if
// the tolerance is not reached within max_iter.
double sinkhorn_w1(const TransportProblem& problem);

// Exact W1 by the transportation simplex. Supports up to 16x16.
double exact_w1(const TransportProblem& problem);

// Hard support limit for exact_w1.
inline constexpr int kExactW1MaxSupport = 16;

}  // namespace ricci
