#include "ricci/flow.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace ricci {

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidInputError("flow dt must be positive");
  if (!(g_floor > 0.0)) throw InvalidInputError("g_floor must be positive");
  if (beta < 0.0) throw InvalidInputError("flow beta must be nonnegative");
  if (steps < 0) throw InvalidInputError("steps must be nonnegative");
  if (curvature_reuse < 1) throw InvalidInputError("curvature_reuse must be >= 1");
}

std::vector<double> flow_rhs(const ParameterGraph& graph, const MetricState& metric,
                             const CurvatureField& field, const std::vector<double>& loss_grad,
                             const FlowConfig& cfg) {
  const int ne = graph.edge_count();
  const int n = cfg.dim(graph);

  // Scalar curvature: volume-weighted mean of the vertex field.
  double vol_sum = 0.0, ric_acc = 0.0;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    vol_sum += metric.vol[v];
    ric_acc += field.ric_vertex[v] * metric.vol[v];
  }
  const double R = vol_sum > 0.0 ? ric_acc / vol_sum : 0.0;

  // Edge loss-gradient squares and their g-weighted mean.
  std::vector<double> G(ne, 0.0);
  double g_sum = 0.0, G_acc = 0.0;
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = graph.edge(e);
    const double d = loss_grad[ed.v] - loss_grad[ed.u];
    G[e] = metric.w[e] * d * d;
    g_sum += metric.g[e];
    G_acc += G[e] * metric.g[e];
  }
  const double Gbar = g_sum > 0.0 ? G_acc / g_sum : 0.0;

  std::vector<double> rhs(ne);
  const double trace_coeff = (R - cfg.beta * Gbar) / n;
  for (int e = 0; e < ne; ++e) {
    const double ric_e = field.kappa[e] * metric.g[e];
    rhs[e] = -2.0 * ric_e + cfg.beta * G[e] + trace_coeff * metric.g[e];
  }
  return rhs;
}

namespace {

void check_finite(const std::vector<double>& rhs, int step_index) {
  for (size_t e = 0; e < rhs.size(); ++e) {
    if (!std::isfinite(rhs[e]))
      throw BlowupError("non-finite flow rhs on edge " + std::to_string(e), static_cast<int>(e),
                        step_index);
  }
}

MetricState advanced(const ParameterGraph& graph, const MetricState& base,
                     const std::vector<double>& k, double scale, double g_floor) {
  MetricState next;
  next.g_floor = g_floor;
  next.g.resize(base.g.size());
  for (size_t e = 0; e < base.g.size(); ++e)
    next.g[e] = std::max(base.g[e] + scale * k[e], g_floor);
  next.refresh(graph);
  return next;
}

}  // namespace

MetricState flow_step_with_field(const ParameterGraph& graph, const MetricState& metric,
                                 const FlowConfig& cfg, const LossOracle& loss,
                                 const CurvatureField& field, int step_index) {
  cfg.validate();
  std::vector<double> grad;
  loss.gradient(graph.theta, grad);

  const CurvatureOptions copts = cfg.curvature_options();
  const double dt = cfg.dt;

  if (cfg.integrator == Integrator::euler) {
    std::vector<double> k1 = flow_rhs(graph, metric, field, grad, cfg);
    check_finite(k1, step_index);
    return advanced(graph, metric, k1, dt, cfg.g_floor);
  }

  // Classical RK4; interior stage metrics are clamped to the floor so
  // curvature stays well defined.
  std::vector<double> k1 = flow_rhs(graph, metric, field, grad, cfg);
  check_finite(k1, step_index);
  MetricState s2 = advanced(graph, metric, k1, dt / 2.0, cfg.g_floor);
  std::vector<double> k2 = flow_rhs(graph, s2, curvature_field(graph, s2, copts), grad, cfg);
  check_finite(k2, step_index);
  MetricState s3 = advanced(graph, metric, k2, dt / 2.0, cfg.g_floor);
  std::vector<double> k3 = flow_rhs(graph, s3, curvature_field(graph, s3, copts), grad, cfg);
  check_finite(k3, step_index);
  MetricState s4 = advanced(graph, metric, k3, dt, cfg.g_floor);
  std::vector<double> k4 = flow_rhs(graph, s4, curvature_field(graph, s4, copts), grad, cfg);
  check_finite(k4, step_index);

  std::vector<double> combo(k1.size());
  for (size_t e = 0; e < k1.size(); ++e)
    combo[e] = (k1[e] + 2.0 * k2[e] + 2.0 * k3[e] + k4[e]) / 6.0;
  return advanced(graph, metric, combo, dt, cfg.g_floor);
}

MetricState flow_step(const ParameterGraph& graph, const MetricState& metric,
                      const FlowConfig& cfg, const LossOracle& loss) {
  const CurvatureField field = curvature_field(graph, metric, cfg.curvature_options());
  return flow_step_with_field(graph, metric, cfg, loss, field);
}

FlowResult evolve(const ParameterGraph& graph, const MetricState& metric, const FlowConfig& cfg,
                  const LossOracle& loss) {
  cfg.validate();
  FlowResult out;
  out.metric = metric;
  out.trace.reserve(cfg.steps);

  const CurvatureOptions copts = cfg.curvature_options();
  const double lp = default_lp_exponent(cfg.dim(graph));
  const double loss_value = loss.value(graph.theta);

  CurvatureField field;
  for (int step = 0; step < cfg.steps; ++step) {
    if (step % cfg.curvature_reuse == 0 || field.kappa.size() != out.metric.g.size())
      field = curvature_field(graph, out.metric, copts);

    double vol_sum = 0.0, ric_acc = 0.0;
    for (int v = 0; v < graph.vertex_count(); ++v) {
      vol_sum += out.metric.vol[v];
      ric_acc += field.ric_vertex[v] * out.metric.vol[v];
    }
    out.trace.push_back(FlowTraceRow{step, step * cfg.dt, loss_value,
                                     curvature_norm(field, out.metric, 2.0, 0),
                                     curvature_norm(field, out.metric, lp, 1),
                                     out.metric.min_g(), out.metric.max_g(),
                                     vol_sum > 0.0 ? ric_acc / vol_sum : 0.0});
    try {
      out.metric = flow_step_with_field(graph, out.metric, cfg, loss, field, step);
    } catch (BlowupError& err) {
      throw BlowupError(std::string(err.what()) + " at step " + std::to_string(step), err.edge,
                        step);
    }
  }
  return out;
}

void write_flow_trace_csv(const std::vector<FlowTraceRow>& trace, std::ostream& out) {
  out << "step,t,loss,ric_l2,grad_ric_lp,min_g,max_g,R\n";
  out.precision(17);
  for (const auto& row : trace) {
    out << row.step << ',' << row.t << ',' << row.loss << ',' << row.ric_l2 << ','
        << row.grad_ric_lp << ',' << row.min_g << ',' << row.max_g << ',' << row.scalar_R
        << '\n';
  }
}

}  // namespace ricci
