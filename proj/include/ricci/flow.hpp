#pragma once

#include <memory>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

enum class Integrator { euler, rk4 };

struct FlowConfig {
  double beta = 0.0;          // loss coupling
  double dt = 0.01;           // time step
  Integrator integrator = Integrator::euler;
  double g_floor = 1e-6;
  double alpha = 0.5;         // measure idleness for curvature
  int steps = 0;
  int n = 0;                  // trace-term dimension; 0 -> graph.intrinsic_dim()
  int curvature_reuse = 1;    // recompute the field every k steps
  CurvatureOptions transport; // transport solver options (alpha copied in)

  CurvatureOptions curvature_options() const {
    CurvatureOptions o = transport;
    o.alpha = alpha;
    return o;
  }
  int dim(const ParameterGraph& graph) const { return n > 0 ? n : graph.intrinsic_dim(); }
  void validate() const;
};

// Deterministic loss over the per-vertex parameters. Implementations
// must return value >= 0 and a gradient consistent with it.
class LossOracle {
 public:
  virtual ~LossOracle() = default;
  virtual double value(const std::vector<double>& theta) const = 0;
  virtual void gradient(const std::vector<double>& theta, std::vector<double>& grad) const = 0;
};

class ZeroLoss final : public LossOracle {
 public:
  double value(const std::vector<double>&) const override { return 0.0; }
  void gradient(const std::vector<double>& theta, std::vector<double>& grad) const override {
    grad.assign(theta.size(), 0.0);
  }
};

// Coupled flow right-hand side per edge:
//   rhs_e = -2 Ric_e + beta G_e + (1/n)(R - beta Gbar) g_e
// with Ric_e = kappa_e g_e, G_e = w_e (dL_j - dL_i)^2, R the
// volume-weighted mean vertex curvature and Gbar the g-weighted mean of
// G over edges.
std::vector<double> flow_rhs(const ParameterGraph& graph, const MetricState& metric,
                             const CurvatureField& field, const std::vector<double>& loss_grad,
                             const FlowConfig& cfg);

// One integration step followed by the positivity projection. RK4
// recomputes the curvature field at every stage.
MetricState flow_step(const ParameterGraph& graph, const MetricState& metric,
                      const FlowConfig& cfg, const LossOracle& loss);

// Same, reusing a field already computed for the current metric (saves
// one curvature evaluation; RK4 still recomputes interior stages).
MetricState flow_step_with_field(const ParameterGraph& graph, const MetricState& metric,
                                 const FlowConfig& cfg, const LossOracle& loss,
                                 const CurvatureField& field, int step_index = 0);

struct FlowTraceRow {
  int step;
  double t;
  double loss;
  double ric_l2;       // order-0 L2 norm
  double grad_ric_lp;  // order-1 L^p norm at the default exponent
  double min_g;
  double max_g;
  double scalar_R;
};

struct FlowResult {
  MetricState metric;
  std::vector<FlowTraceRow> trace;  // one row per executed step (pre-step state)
};

// Runs cfg.steps flow steps, recomputing curvature each step per the
// reuse interval. Throws BlowupError (with the step index) on a
// non-finite right-hand side.
FlowResult evolve(const ParameterGraph& graph, const MetricState& metric, const FlowConfig& cfg,
                  const LossOracle& loss);

void write_flow_trace_csv(const std::vector<FlowTraceRow>& trace, std::ostream& out);

}  // namespace ricci
