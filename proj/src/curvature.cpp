#include "ricci/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ricci {

namespace {

// W1 between the walk measures at the endpoints of edge e, together
// with the ground distance d(u, v). Supports and cost matrices are
// small (degree + 1), so everything stays dense.
struct EdgeTransport {
  double w1;
  double dist;
};

EdgeTransport edge_transport(ShortestPathEngine& paths, const VertexMeasure& mu,
                             const VertexMeasure& nu, int u, int v,
                             const CurvatureOptions& opts) {
  TransportProblem problem;
  problem.mu = mu;
  problem.nu = nu;

  // Column targets: the nu support, with v appended when alpha = 0 so
  // that d(u, v) falls out of the same Dijkstra runs.
  std::vector<int> targets = nu.support;
  int v_col = -1;
  for (size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] == v) {
      v_col = static_cast<int>(k);
      break;
    }
  }
  if (v_col < 0) {
    v_col = static_cast<int>(targets.size());
    targets.push_back(v);
  }

  const int n = mu.size();
  const int m = nu.size();
  problem.cost.resize(n, m);
  double dist_uv = std::numeric_limits<double>::infinity();
  bool u_in_support = false;
  std::vector<double> row;
  for (int i = 0; i < n; ++i) {
    paths.distances(mu.support[i], targets, row);
    for (int j = 0; j < m; ++j) problem.cost(i, j) = row[j];
    if (mu.support[i] == u) {
      dist_uv = row[v_col];
      u_in_support = true;
    }
  }
  if (!u_in_support) {
    std::vector<int> vt{v};
    paths.distances(u, vt, row);
    dist_uv = row[0];
  }

  if (!(dist_uv > 0.0))
    throw DegenerateEdgeError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") has zero ground distance");

  double w1;
  if (opts.oracle_transport && n <= kExactW1MaxSupport && m <= kExactW1MaxSupport) {
    w1 = exact_w1(problem);
  } else {
    const double cmax = problem.cost.maxCoeff();
    problem.epsilon = std::max(opts.epsilon_scale * cmax, 1e-12);
    problem.tol = opts.sinkhorn_tol;
    problem.max_iter = opts.sinkhorn_max_iter;
    w1 = cmax == 0.0 ? 0.0 : sinkhorn_w1(problem);
  }
  return {w1, dist_uv};
}

}  // namespace

double edge_curvature(const ParameterGraph& graph, const MetricState& metric, int e,
                      const CurvatureOptions& opts) {
  const Edge& ed = graph.edge(e);
  ShortestPathEngine paths(graph, metric, opts.hop_distance);
  const VertexMeasure mu = vertex_measure(graph, metric, ed.u, opts.alpha);
  const VertexMeasure nu = vertex_measure(graph, metric, ed.v, opts.alpha);
  const EdgeTransport t = edge_transport(paths, mu, nu, ed.u, ed.v, opts);
  return 1.0 - t.w1 / t.dist;
}

CurvatureField curvature_field(const ParameterGraph& graph, const MetricState& metric,
                               const CurvatureOptions& opts) {
  const int nv = graph.vertex_count();
  const int ne = graph.edge_count();
  CurvatureField field;
  field.kappa.assign(ne, 0.0);
  field.ric_vertex.assign(nv, 0.0);
  field.ric_edge.assign(ne, 0.0);
  field.grad_ric.assign(ne, 0.0);

  ShortestPathEngine paths(graph, metric, opts.hop_distance);

  // Measures are shared across the incident edges of a vertex.
  std::vector<VertexMeasure> measures(nv);
  for (int v = 0; v < nv; ++v) {
    if (!graph.is_isolated(v)) measures[v] = vertex_measure(graph, metric, v, opts.alpha);
  }

  for (int e = 0; e < ne; ++e) {
    const Edge& ed = graph.edge(e);
    try {
      const EdgeTransport t =
          edge_transport(paths, measures[ed.u], measures[ed.v], ed.u, ed.v, opts);
      field.kappa[e] = 1.0 - t.w1 / t.dist;
    } catch (const DegenerateEdgeError&) {
      throw;
    } catch (const TransportConvergenceError& err) {
      throw TransportConvergenceError("edge " + std::to_string(e) + ": " + err.what(),
                                      err.marginal_violation);
    }
    field.ric_edge[e] = field.kappa[e] * metric.g[e];
  }

  for (int v = 0; v < nv; ++v) {
    double wsum = 0.0, acc = 0.0;
    for (const auto& [nbr, eid] : graph.neighbors(v)) {
      (void)nbr;
      wsum += metric.w[eid];
      acc += metric.w[eid] * field.kappa[eid];
    }
    field.ric_vertex[v] = wsum > 0.0 ? acc / wsum : 0.0;
  }
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = graph.edge(e);
    field.grad_ric[e] =
        std::sqrt(metric.w[e]) * (field.ric_vertex[ed.v] - field.ric_vertex[ed.u]);
  }
  return field;
}

double curvature_norm(const CurvatureField& field, const MetricState& metric, double p,
                      int order) {
  if (order != 0 && order != 1) throw InvalidInputError("curvature_norm order must be 0 or 1");
  const bool inf_norm = std::isinf(p);
  if (!inf_norm && !(p >= 1.0)) throw InvalidInputError("curvature_norm needs p >= 1");

  if (order == 0) {
    double acc = 0.0;
    for (size_t i = 0; i < field.ric_vertex.size(); ++i) {
      const double a = std::abs(field.ric_vertex[i]);
      if (inf_norm)
        acc = std::max(acc, a);
      else
        acc += std::pow(a, p) * metric.vol[i];
    }
    return inf_norm ? acc : std::pow(acc, 1.0 / p);
  }
  double acc = 0.0;
  for (size_t e = 0; e < field.grad_ric.size(); ++e) {
    const double a = std::abs(field.grad_ric[e]);
    if (inf_norm)
      acc = std::max(acc, a);
    else
      acc += std::pow(a, p) * metric.g[e];
  }
  return inf_norm ? acc : std::pow(acc, 1.0 / p);
}

std::vector<double> graph_gradient(const ParameterGraph& graph, const MetricState& metric,
                                   const std::vector<double>& f) {
  std::vector<double> out(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    out[e] = std::sqrt(metric.w[e]) * (f[ed.v] - f[ed.u]);
  }
  return out;
}

std::vector<double> graph_laplacian(const ParameterGraph& graph, const MetricState& metric,
                                    const std::vector<double>& f) {
  std::vector<double> out(graph.vertex_count(), 0.0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double flow = metric.w[e] * (f[ed.v] - f[ed.u]);
    out[ed.u] += flow;
    out[ed.v] -= flow;
  }
  return out;
}

BochnerTerms bochner_decomposition(const ParameterGraph& graph, const MetricState& metric,
                                   const std::vector<double>& f, const CurvatureField& field,
                                   BochnerCurvatureTerm variant) {
  const int nv = graph.vertex_count();
  for (double x : f)
    if (!std::isfinite(x)) throw InvalidInputError("bochner input field must be finite");

  const std::vector<double> lap = graph_laplacian(graph, metric, f);

  // |grad f|^2(i) = sum_j w_ij (f_j - f_i)^2
  std::vector<double> gradsq(nv, 0.0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double d = f[ed.v] - f[ed.u];
    gradsq[ed.u] += metric.w[e] * d * d;
    gradsq[ed.v] += metric.w[e] * d * d;
  }
  const std::vector<double> lap_gradsq = graph_laplacian(graph, metric, gradsq);

  BochnerTerms out;
  out.gamma2.assign(nv, 0.0);
  out.hessian_sq.assign(nv, 0.0);
  out.curvature_term.assign(nv, 0.0);
  out.residual.assign(nv, 0.0);

  for (int i = 0; i < nv; ++i) {
    double inner = 0.0;       // <grad f, grad Delta f>(i)
    double hess = 0.0;        // (1/2) sum_j w_ij (grad_j - grad_i)^2, Delta f surrogate
    double curv_avg = 0.0;    // averaged-Ric variant accumulator
    for (const auto& [j, eid] : graph.neighbors(i)) {
      const double df = f[j] - f[i];
      inner += metric.w[eid] * df * (lap[j] - lap[i]);
      const double dl = lap[j] - lap[i];
      hess += 0.5 * metric.w[eid] * dl * dl;
      curv_avg += 0.5 * metric.w[eid] * (field.ric_vertex[i] + field.ric_vertex[j]) * df * df;
    }
    out.gamma2[i] = 0.5 * lap_gradsq[i] - inner;
    out.hessian_sq[i] = hess;
    out.curvature_term[i] = variant == BochnerCurvatureTerm::plain
                                ? field.ric_vertex[i] * gradsq[i]
                                : curv_avg;
    out.residual[i] = out.gamma2[i] - out.hessian_sq[i] - out.curvature_term[i];
  }
  return out;
}

double default_lp_exponent(int n) { return std::max(2.0, (n + 2) / 2.0); }

}  // namespace ricci
