#include "ricci/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace ricci {

void SurgeryConfig::validate() const {
  if (!(kappa_thresh > 0.0)) throw InvalidInputError("kappa_thresh must be positive");
  if (!(bn_eps > 0.0)) throw InvalidInputError("bn_eps must be positive");
}

const char* surgery_kind_name(SurgeryKind kind) {
  switch (kind) {
    case SurgeryKind::none: return "none";
    case SurgeryKind::neckpinch: return "neckpinch";
    case SurgeryKind::collapse: return "collapse";
    case SurgeryKind::conical: return "conical";
  }
  return "none";
}

std::string SurgeryEvent::to_json_line() const {
  std::ostringstream ss;
  ss.precision(17);
  ss << "{\"step\":" << step << ",\"kind\":\"" << surgery_kind_name(kind) << "\""
     << ",\"edge\":" << edge << ",\"lambda_or_alpha\":" << lambda_or_alpha
     << ",\"pre_norm\":" << pre_norm << ",\"post_norm\":" << post_norm
     << ",\"no_op\":" << (no_op ? "true" : "false") << ",\"edges_added\":" << edges_added << "}";
  return ss.str();
}

SurgeryKind detect(const CurvatureField& field, const MetricState& metric,
                   const SurgeryConfig& cfg) {
  cfg.validate();
  const double inf = std::numeric_limits<double>::infinity();
  if (curvature_norm(field, metric, inf, 1) > cfg.kappa_thresh) return SurgeryKind::neckpinch;
  if (metric.min_g() < 1.0 / cfg.kappa_thresh) return SurgeryKind::collapse;
  if (curvature_norm(field, metric, 2.0, 0) > cfg.kappa_thresh) return SurgeryKind::conical;
  return SurgeryKind::none;
}

NeckpinchResult neckpinch(const ParameterGraph& graph, const MetricState& metric,
                          const CurvatureField& field, double loss_value,
                          const SurgeryConfig& cfg) {
  cfg.validate();
  NeckpinchResult out{graph, metric, SurgeryEvent{}};
  out.event.kind = SurgeryKind::neckpinch;

  // Singular edge: argmax |grad_ric|, lowest id on ties.
  int singular = -1;
  double best = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double a = std::abs(field.grad_ric[e]);
    if (a > best) {
      best = a;
      singular = e;
    }
  }
  if (singular < 0) {
    out.event.no_op = true;  // flat field, nothing to pinch
    return out;
  }
  out.event.edge = singular;
  out.event.pre_norm = best;

  const double lambda = std::log(best) / cfg.kappa_thresh;
  out.event.lambda_or_alpha = lambda;
  const double g_new = std::max(std::exp(-lambda * loss_value), metric.g_floor);
  out.event.post_norm = g_new;

  // Closed neighborhoods of the endpoints; every currently missing pair
  // inside the union becomes a shortcut edge.
  const Edge& ed = graph.edge(singular);
  std::vector<int> hood{ed.u, ed.v};
  for (const auto& [nbr, eid] : graph.neighbors(ed.u)) {
    (void)eid;
    hood.push_back(nbr);
  }
  for (const auto& [nbr, eid] : graph.neighbors(ed.v)) {
    (void)eid;
    hood.push_back(nbr);
  }
  std::sort(hood.begin(), hood.end());
  hood.erase(std::unique(hood.begin(), hood.end()), hood.end());

  int added = 0;
  for (size_t a = 0; a < hood.size(); ++a) {
    for (size_t b = a + 1; b < hood.size(); ++b) {
      if (out.graph.has_edge(hood[a], hood[b])) continue;
      out.graph.add_edge(hood[a], hood[b]);
      out.metric.g.push_back(g_new);
      ++added;
    }
  }
  out.event.edges_added = added;
  out.event.no_op = added == 0;
  out.metric.refresh(out.graph);
  return out;
}

MetricSurgeryResult collapse_normalize(const ParameterGraph& graph, const MetricState& metric,
                                       const SurgeryConfig& cfg) {
  cfg.validate();
  if (metric.g.size() < 2) throw InvalidInputError("collapse_normalize needs >= 2 edges");

  MetricSurgeryResult out{metric, SurgeryEvent{}};
  out.event.kind = SurgeryKind::collapse;
  out.event.pre_norm = metric.min_g();

  const size_t m = metric.g.size();
  double mean = 0.0;
  for (double g : metric.g) mean += g;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double g : metric.g) var += (g - mean) * (g - mean);
  var /= static_cast<double>(m);

  const double denom = std::sqrt(var + cfg.bn_eps);
  for (size_t e = 0; e < m; ++e) {
    const double gt = (metric.g[e] - mean) / denom * cfg.bn_gamma + cfg.bn_shift;
    out.metric.g[e] = std::max(gt, metric.g_floor);
  }
  out.metric.refresh(graph);
  out.event.post_norm = out.metric.min_g();
  return out;
}

MetricSurgeryResult conical_repair(const ParameterGraph& graph, const MetricState& metric,
                                   const CurvatureField& field, const SurgeryConfig& cfg) {
  cfg.validate();
  MetricSurgeryResult out{metric, SurgeryEvent{}};
  out.event.kind = SurgeryKind::conical;

  const double ric_norm = curvature_norm(field, metric, 2.0, 0);
  out.event.pre_norm = ric_norm;
  if (!(ric_norm > 0.0)) {
    out.event.no_op = true;
    return out;
  }
  const double alpha = std::sqrt(cfg.kappa_thresh / ric_norm);
  out.event.lambda_or_alpha = alpha;

  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double theta_bar =
        0.5 * (std::abs(graph.theta[ed.u]) + std::abs(graph.theta[ed.v]));
    const double gp = metric.g[e] + alpha * field.kappa[e] * metric.g[e] * theta_bar * theta_bar;
    out.metric.g[e] = std::max(gp, metric.g_floor);
  }
  out.metric.refresh(graph);
  out.event.post_norm = out.metric.min_g();
  return out;
}

void write_surgery_log(const std::vector<SurgeryEvent>& events, std::ostream& out) {
  for (const auto& ev : events) out << ev.to_json_line() << "\n";
}

}  // namespace ricci
