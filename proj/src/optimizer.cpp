#include "ricci/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace ricci {

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Finite-difference diagonal-Hessian field for CurvatureMode::hessian_diag:
// ric_vertex_i = d^2 L / d theta_i^2, edge values are endpoint means.
CurvatureField hessian_diag_field(const ParameterGraph& graph, const MetricState& metric,
                                  const LossOracle& loss, const std::vector<double>& theta) {
  const int nv = graph.vertex_count();
  CurvatureField field;
  field.ric_vertex.assign(nv, 0.0);
  field.kappa.assign(graph.edge_count(), 0.0);
  field.ric_edge.assign(graph.edge_count(), 0.0);
  field.grad_ric.assign(graph.edge_count(), 0.0);

  std::vector<double> probe(theta);
  const double base = loss.value(theta);
  for (int i = 0; i < nv; ++i) {
    const double h = 1e-4 * (1.0 + std::abs(theta[i]));
    probe[i] = theta[i] + h;
    const double up = loss.value(probe);
    probe[i] = theta[i] - h;
    const double down = loss.value(probe);
    probe[i] = theta[i];
    field.ric_vertex[i] = (up - 2.0 * base + down) / (h * h);
  }
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    field.ric_edge[e] = 0.5 * (field.ric_vertex[ed.u] + field.ric_vertex[ed.v]);
    field.kappa[e] = field.ric_edge[e] / metric.g[e];
    field.grad_ric[e] =
        std::sqrt(metric.w[e]) * (field.ric_vertex[ed.v] - field.ric_vertex[ed.u]);
  }
  return field;
}

CurvatureField compute_field(const ParameterGraph& graph, const MetricState& metric,
                             const LossOracle& loss, const std::vector<double>& theta,
                             const OptimizerConfig& cfg) {
  if (cfg.curvature_mode == CurvatureMode::hessian_diag)
    return hessian_diag_field(graph, metric, loss, theta);
  return curvature_field(graph, metric, cfg.flow.curvature_options());
}

}  // namespace

void LrState::observe(const std::vector<double>& dtheta, const std::vector<double>& dgrad) {
  const double dt = norm2(dtheta);
  if (dt <= 0.0) return;
  const double ratio = norm2(dgrad) / dt;
  if (std::isfinite(ratio)) l_lip = std::max({l_lip, ratio, 1e-8});
}

CriticalLr critical_lr(const LrState& state, double beta, int n) {
  if (!(state.c_n > 0.0)) throw InvalidInputError("C_n must be positive");
  if (n < 1) throw InvalidInputError("dimension must be >= 1");
  const double L = std::max(state.l_lip, 1e-8);
  const double denom = state.c_n * std::pow(L, 2.0 / n);
  double disc = 1.0 - 4.0 * beta * state.l0 / (denom * denom);
  CriticalLr out;
  if (disc < 0.0) {
    disc = 0.0;
    out.discriminant_clamped = true;
  }
  out.value = std::min(2.0 / denom * (1.0 + std::sqrt(disc)), state.eta_max);
  return out;
}

double optimal_lr(double eta_c, double grad_ric_norm) {
  if (!(eta_c > 0.0)) throw InvalidInputError("eta_c must be positive");
  if (grad_ric_norm < 0.0) throw InvalidInputError("curvature norm must be nonnegative");
  return eta_c / (1.0 + std::sqrt(grad_ric_norm));
}

double lyapunov(const CurvatureField& field, const MetricState& metric, double loss_value,
                double beta) {
  if (loss_value < 0.0) throw InvalidInputError("loss must be nonnegative");
  double v = 0.0;
  for (size_t i = 0; i < field.ric_vertex.size(); ++i)
    v += field.ric_vertex[i] * field.ric_vertex[i] * metric.vol[i];
  return v + beta * loss_value;
}

MetricState theta_sq_metric(const ParameterGraph& graph, const std::vector<double>& theta,
                            double g_floor) {
  MetricState m;
  m.g_floor = g_floor;
  m.g.resize(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double v = 0.5 * (theta[ed.u] * theta[ed.u] + theta[ed.v] * theta[ed.v]);
    m.g[e] = std::max(v, g_floor);
  }
  m.refresh(graph);
  return m;
}

void init_optimizer_state(OptimizerState& state, ParameterGraph& graph,
                          const MetricState& metric, const std::vector<double>& theta0,
                          const LossOracle& loss, const OptimizerConfig& cfg) {
  state.theta = theta0;
  graph.theta = theta0;
  state.step = 0;
  state.lr.c_n = cfg.c_n;
  state.lr.eta_max = cfg.eta_max;

  std::vector<double> grad0;
  loss.gradient(theta0, grad0);
  state.cached_loss = loss.value(theta0);
  state.cached_grad = grad0;
  state.have_eval = true;
  state.lr.l0 = state.cached_loss;

  // Lipschitz warmup: one deterministic probe displacement.
  std::vector<double> probe(theta0), dtheta(theta0.size()), dgrad;
  for (size_t i = 0; i < probe.size(); ++i) {
    dtheta[i] = 1e-3 * (1.0 + std::abs(theta0[i]));
    probe[i] += dtheta[i];
  }
  loss.gradient(probe, dgrad);
  for (size_t i = 0; i < dgrad.size(); ++i) dgrad[i] -= grad0[i];
  state.lr.observe(dtheta, dgrad);
  state.last_grad = grad0;

  if (!cfg.adaptive_lr) {
    state.frozen_eta = cfg.fixed_eta > 0.0
                           ? cfg.fixed_eta
                           : 2.0 / (cfg.c_n * std::pow(std::max(state.lr.l_lip, 1e-8),
                                                       2.0 / cfg.flow.dim(graph)));
    state.frozen_eta = std::min(state.frozen_eta, cfg.eta_max);
  }

  state.field = compute_field(graph, metric, loss, theta0, cfg);
  state.field_age = 0;
  state.lyapunov_history.assign(1, lyapunov(*state.field, metric, state.cached_loss,
                                            cfg.flow.beta));
}

MetaStepOutcome meta_step(ParameterGraph& graph, MetricState& metric, OptimizerState& state,
                          const LossOracle& loss, const OptimizerConfig& cfg) {
  MetaStepOutcome out;
  const int n = cfg.flow.dim(graph);
  const double lp = default_lp_exponent(n);

  // (1) loss and gradient at the current parameters.
  if (!state.have_eval) {
    state.cached_loss = loss.value(state.theta);
    loss.gradient(state.theta, state.cached_grad);
    state.have_eval = true;
  }
  const double loss_now = state.cached_loss;
  std::vector<double> grad = state.cached_grad;

  // (2) curvature field (cached between steps; reuse interval applies).
  if (!state.field || state.field->kappa.size() != metric.g.size() ||
      state.field_age >= cfg.flow.curvature_reuse) {
    state.field = compute_field(graph, metric, loss, state.theta, cfg);
    state.field_age = 0;
  }

  // (3) surgery dispatch when the curvature-derivative norm is critical.
  if (cfg.enable_surgery && curvature_norm(*state.field, metric, lp, 1) > cfg.surgery.kappa_thresh) {
    const SurgeryKind kind = detect(*state.field, metric, cfg.surgery);
    out.surgery = kind;
    SurgeryEvent event;
    switch (kind) {
      case SurgeryKind::neckpinch: {
        NeckpinchResult res = neckpinch(graph, metric, *state.field, loss_now, cfg.surgery);
        graph = std::move(res.graph);
        metric = std::move(res.metric);
        event = res.event;
        break;
      }
      case SurgeryKind::collapse: {
        MetricSurgeryResult res = collapse_normalize(graph, metric, cfg.surgery);
        metric = std::move(res.metric);
        event = res.event;
        break;
      }
      case SurgeryKind::conical: {
        MetricSurgeryResult res = conical_repair(graph, metric, *state.field, cfg.surgery);
        metric = std::move(res.metric);
        event = res.event;
        break;
      }
      case SurgeryKind::none:
        break;
    }
    if (kind != SurgeryKind::none) {
      event.step = state.step + 1;  // matches the 1-based row numbering
      if (cfg.surgery.record) state.events.push_back(event);
      // Geometry changed; recompute before the learning-rate step.
      state.field = compute_field(graph, metric, loss, state.theta, cfg);
      state.field_age = 0;
    }
  }

  // (4) curvature-aware learning rate.
  const double gnorm = curvature_norm(*state.field, metric, lp, 1);
  const CriticalLr etac = critical_lr(state.lr, cfg.flow.beta, n);
  out.eta_c = etac.value;
  double eta = cfg.adaptive_lr ? optimal_lr(etac.value, gnorm) : state.frozen_eta;
  out.eta_star = eta;

  // (5) coupled parameter update, one halved retry on non-finite.
  const std::vector<double>& ric = state.field->ric_vertex;
  std::vector<double> theta_new(state.theta.size());
  for (int attempt = 0;; ++attempt) {
    bool finite = true;
    if (cfg.coupling == CouplingMode::diagonal || !cfg.curvature_coupling) {
      for (size_t i = 0; i < state.theta.size(); ++i) {
        const double coupled =
            cfg.curvature_coupling ? grad[i] + ric[i] * grad[i] : grad[i];
        theta_new[i] = state.theta[i] - eta * coupled;
        finite = finite && std::isfinite(theta_new[i]);
      }
    } else {
      // Laplacian-style coupling: sum_j kappa_ij w_ij (grad_j - grad_i).
      std::vector<double> coupling(state.theta.size(), 0.0);
      for (int e = 0; e < graph.edge_count(); ++e) {
        const Edge& ed = graph.edge(e);
        const double flow = state.field->kappa[e] * metric.w[e] * (grad[ed.v] - grad[ed.u]);
        coupling[ed.u] += flow;
        coupling[ed.v] -= flow;
      }
      for (size_t i = 0; i < state.theta.size(); ++i) {
        theta_new[i] = state.theta[i] - eta * (grad[i] + coupling[i]);
        finite = finite && std::isfinite(theta_new[i]);
      }
    }
    if (finite) break;
    if (attempt >= 1)
      throw DivergenceError("meta_step produced non-finite parameters at step " +
                            std::to_string(state.step));
    eta *= 0.5;
    out.eta_star = eta;
  }

  const std::vector<double> theta_old = std::move(state.theta);
  state.theta = std::move(theta_new);
  graph.theta = state.theta;

  // (6) one flow step on the evolved parameters.
  if (cfg.enable_flow) {
    metric = flow_step_with_field(graph, metric, cfg.flow, loss, *state.field, state.step);
    ++state.field_age;
  }

  // (7) bookkeeping: next-state evaluation, Lipschitz update, Lyapunov.
  double loss_new = loss.value(state.theta);
  std::vector<double> grad_new;
  loss.gradient(state.theta, grad_new);

  std::vector<double> dtheta(state.theta.size()), dgrad(grad_new.size());
  for (size_t i = 0; i < state.theta.size(); ++i) dtheta[i] = state.theta[i] - theta_old[i];
  for (size_t i = 0; i < grad_new.size(); ++i) dgrad[i] = grad_new[i] - grad[i];
  state.lr.observe(dtheta, dgrad);

  state.cached_loss = loss_new;
  state.cached_grad = std::move(grad_new);
  state.have_eval = true;
  state.last_grad = state.cached_grad;

  if (state.field_age >= cfg.flow.curvature_reuse ||
      state.field->kappa.size() != metric.g.size()) {
    state.field = compute_field(graph, metric, loss, state.theta, cfg);
    state.field_age = 0;
  }
  out.loss = loss_new;
  out.lyapunov = lyapunov(*state.field, metric, loss_new, cfg.flow.beta);
  out.ric_l2 = curvature_norm(*state.field, metric, 2.0, 0);
  out.grad_ric_lp = curvature_norm(*state.field, metric, lp, 1);

  double vol_sum = 0.0, ric_acc = 0.0;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    vol_sum += metric.vol[v];
    ric_acc += state.field->ric_vertex[v] * metric.vol[v];
  }
  out.scalar_R = vol_sum > 0.0 ? ric_acc / vol_sum : 0.0;

  ++state.step;
  state.lyapunov_history.push_back(out.lyapunov);
  return out;
}

RunReport run(ParameterGraph& graph, MetricState& metric, const std::vector<double>& theta0,
              const LossOracle& loss, const OptimizerConfig& cfg, const RunBudget& budget,
              OptimizerState* final_state) {
  if (budget.max_steps < 0 || !(budget.eps > 0.0))
    throw InvalidInputError("budget needs max_steps >= 0 and eps > 0");

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  RunReport report;
  report.serial_mode = cfg.serial;

  OptimizerState state;
  init_optimizer_state(state, graph, metric, theta0, loss, cfg);

  const int n = cfg.flow.dim(graph);
  const double lp = default_lp_exponent(n);
  const TopologySnapshot topo0_raw = betti(graph);
  const TopologySnapshot topo0_eff = betti_effective(graph, metric, cfg.topo_cutoff_ratio);

  auto push_row = [&](int step, double eta_star, double eta_c, double loss_value, double V,
                      double ric_l2, double grad_lp, double R, SurgeryKind kind,
                      double wall_ms) {
    StepRow row;
    row.step = step;
    row.t = step * cfg.flow.dt;
    row.loss = loss_value;
    row.lyapunov = V;
    row.eta_star = eta_star;
    row.eta_c = eta_c;
    row.ric_l2 = ric_l2;
    row.grad_ric_lp = grad_lp;
    row.min_g = metric.min_g();
    row.max_g = metric.max_g();
    row.scalar_R = R;
    const TopologySnapshot raw = betti(graph);
    TopologySnapshot eff = betti_effective(graph, metric, cfg.topo_cutoff_ratio);
    eff = betti_bound(eff, topo0_eff.euler, *state.field, metric);
    row.edges = raw.edges;
    row.edges_eff = eff.edges;
    row.b0 = eff.b0;
    row.b1 = eff.b1;
    row.betti_sum = eff.betti_sum;
    row.bound_rhs = eff.bound_rhs;
    row.bound_ok = eff.bound_satisfied;
    row.b0_raw = raw.b0;
    row.b1_raw = raw.b1;
    row.surgery = surgery_kind_name(kind);
    row.wall_ms = cfg.serial ? 0.0 : wall_ms;
    report.rows.push_back(row);
  };

  {
    double vol_sum = 0.0, ric_acc = 0.0;
    for (int v = 0; v < graph.vertex_count(); ++v) {
      vol_sum += metric.vol[v];
      ric_acc += state.field->ric_vertex[v] * metric.vol[v];
    }
    push_row(0, 0.0, 0.0, state.cached_loss, state.lyapunov_history[0],
             curvature_norm(*state.field, metric, 2.0, 0),
             curvature_norm(*state.field, metric, lp, 1),
             vol_sum > 0.0 ? ric_acc / vol_sum : 0.0, SurgeryKind::none, 0.0);
  }

  for (int step = 1; step <= budget.max_steps; ++step) {
    if (state.cached_loss <= budget.eps) break;
    if (!budget.loss_only && state.lyapunov_history.back() <= budget.eps) break;
    const auto s0 = clock::now();
    MetaStepOutcome outcome;
    try {
      outcome = meta_step(graph, metric, state, loss, cfg);
    } catch (const DivergenceError& err) {
      report.diverged = true;
      report.failure = err.what();
      break;
    } catch (const BlowupError& err) {
      report.diverged = true;
      report.failure = err.what();
      break;
    } catch (const TransportConvergenceError& err) {
      report.diverged = true;
      report.failure = err.what();
      break;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - s0).count();
    push_row(step, outcome.eta_star, outcome.eta_c, outcome.loss, outcome.lyapunov,
             outcome.ric_l2, outcome.grad_ric_lp, outcome.scalar_R, outcome.surgery, wall_ms);
    if (report.steps_to_eps < 0 && outcome.loss <= budget.eps) report.steps_to_eps = step;
  }

  report.events = state.events;

  // Simplification rates against the initial snapshots.
  const TopologySnapshot final_raw = betti(graph);
  const TopologySnapshot final_eff = betti_effective(graph, metric, cfg.topo_cutoff_ratio);
  if (topo0_eff.betti_sum > 0) report.rts_effective = simplification_rate(topo0_eff, final_eff);
  if (topo0_raw.betti_sum > 0) report.rts_raw = simplification_rate(topo0_raw, final_raw);

  // Exponential fit of the Lyapunov decay phase: slope of ln V against t
  // from the start down to the minimum of V.
  {
    size_t vmin_at = 0;
    for (size_t k = 1; k < report.rows.size(); ++k)
      if (report.rows[k].lyapunov < report.rows[vmin_at].lyapunov) vmin_at = k;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (size_t k = 0; k <= vmin_at && k < report.rows.size(); ++k) {
      const auto& row = report.rows[k];
      if (row.lyapunov > 0.0) {
        const double x = row.t, y = std::log(row.lyapunov);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
      }
    }
    if (count >= 2 && sxx * count - sx * sx > 0.0)
      report.fitted_decay_rate = -(count * sxy - sx * sy) / (count * sxx - sx * sx);
  }

  report.total_wall_ms =
      cfg.serial ? 0.0
                 : std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  if (final_state) *final_state = std::move(state);
  return report;
}

}  // namespace ricci
