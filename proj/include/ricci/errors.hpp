#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

// Base class for all library errors. The CLI maps subclasses onto exit
// codes: invalid input -> 3, divergence/blowup -> 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (non-finite coordinate, bad file, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Operation requested on an isolated vertex.
class DegenerateVertexError : public Error {
 public:
  using Error::Error;
};

// Edge with zero ground distance between its endpoints.
class DegenerateEdgeError : public Error {
 public:
  using Error::Error;
};

// Sinkhorn failed to reach the marginal tolerance within max_iter.
// Carries the final L1 marginal violation so the caller can decide to
// retry with a larger epsilon.
class TransportConvergenceError : public Error {
 public:
  TransportConvergenceError(const std::string& what, double violation)
      : Error(what), marginal_violation(violation) {}
  double marginal_violation;
};

// exact_w1 called with a support larger than its hard limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// Non-finite flow right-hand side; signals that surgery is required.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, int edge_id, int step_index)
      : Error(what), edge(edge_id), step(step_index) {}
  int edge;
  int step;
};

// Optimizer step produced non-finite parameters twice in a row.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Entanglement bound requested for an empty or full region.
class BoundaryUndefinedError : public Error {
 public:
  using Error::Error;
};

// Simplification rate with zero initial Betti sum.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ricci
