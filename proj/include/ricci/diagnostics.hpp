#pragma once

#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/flow.hpp"
#include "ricci/graph.hpp"

namespace ricci {

struct HoloConfig {
  double p_drop = 0.5;
  std::vector<int> region;     // vertex subset A
  double g_newton = 1.0;       // G_N
  double hbar = 1.0;
  double eps_quantum = 0.01;   // in (0,1)

  void validate(int vertex_count) const;
};

// Binary entropy -p ln p - (1-p) ln(1-p) in nats, with 0 ln 0 = 0.
double entanglement_entropy(double p);

struct EntanglementBound {
  double s_ent = 0.0;
  double area = 0.0;   // total weight crossing the region boundary
  double bound = 0.0;  // area / (4 G_N)
  bool satisfied = false;
  double rho_e = 0.0;  // s_ent / bound
};

// Holographic bound check for a vertex region: the cut weight plays the
// boundary area. Throws BoundaryUndefinedError for empty/full regions.
EntanglementBound entanglement_bound(const ParameterGraph& graph, const MetricState& metric,
                                     const HoloConfig& cfg);

// Mean over vertices of the rms difference between incident metric
// values; both states must live on the same edge set.
double geometric_distortion(const ParameterGraph& graph, const MetricState& current,
                            const MetricState& reference);

struct RobustnessBound {
  double value = 0.0;
  bool unbounded = false;  // lambda_min <= 0
};

// 2 L rho / sqrt(lambda_min).
RobustnessBound robustness_bound(double l_lip, double rho, double lambda_min_hess);

struct DecoherenceTime {
  double value = 0.0;
  bool infinite = false;  // zero curvature
};

// t_coh = hbar / sqrt(sum ric_i^2 vol_i) * ln(1/eps_quantum).
DecoherenceTime decoherence_time(const CurvatureField& field, const MetricState& metric,
                                 const HoloConfig& cfg);

struct HawkingTemperature {
  double value = 0.0;    // sqrt(|det Hess L|)
  int det_sign = 0;      // -1, 0, +1
  bool diag_approx = false;
};

// Finite-difference Hessian determinant; full Hessian up to 64 vertices,
// diagonal approximation (flagged) beyond that.
HawkingTemperature hawking_temperature(const LossOracle& loss, const std::vector<double>& theta);

// Dense central-difference Hessian (row-major, n x n).
std::vector<double> finite_difference_hessian(const LossOracle& loss,
                                              const std::vector<double>& theta);

// Smallest eigenvalue of the finite-difference Hessian at theta.
double min_hessian_eigenvalue(const LossOracle& loss, const std::vector<double>& theta);

}  // namespace ricci
