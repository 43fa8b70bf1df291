#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

struct SurgeryConfig {
  double kappa_thresh = 1.5;  // curvature threshold kappa
  double bn_gamma = 1.0;      // collapse normalization scale
  double bn_shift = 1.0;      // collapse normalization shift
  double bn_eps = 1e-5;
  bool record = true;

  void validate() const;
};

enum class SurgeryKind { none, neckpinch, collapse, conical };

const char* surgery_kind_name(SurgeryKind kind);

struct SurgeryEvent {
  int step = 0;
  SurgeryKind kind = SurgeryKind::none;
  int edge = -1;                 // singular edge; -1 for global operations
  double lambda_or_alpha = 0.0;  // neckpinch lambda / conical alpha
  double pre_norm = 0.0;         // triggering norm (neckpinch/conical) or pre min g (collapse)
  double post_norm = 0.0;        // new-edge metric (neckpinch) or post min g
  bool no_op = false;
  int edges_added = 0;

  std::string to_json_line() const;
};

// Alg. 2 dispatch: neckpinch when the curvature-gradient sup norm
// exceeds kappa, else collapse when the smallest metric entry drops
// under 1/kappa, else conical when the curvature L2 norm exceeds kappa.
SurgeryKind detect(const CurvatureField& field, const MetricState& metric,
                   const SurgeryConfig& cfg);

struct NeckpinchResult {
  ParameterGraph graph;
  MetricState metric;
  SurgeryEvent event;
};

// Shortcut insertion around the edge with the largest |grad Ric|
// (lowest edge id on ties): every non-adjacent pair among the closed
// neighborhoods of its endpoints gets a new edge with metric
// exp(-lambda * loss), lambda = log(max |grad Ric|) / kappa.
NeckpinchResult neckpinch(const ParameterGraph& graph, const MetricState& metric,
                          const CurvatureField& field, double loss_value,
                          const SurgeryConfig& cfg);

struct MetricSurgeryResult {
  MetricState metric;
  SurgeryEvent event;
};

// Batch-normalizes the metric over edges and clamps to the floor.
MetricSurgeryResult collapse_normalize(const ParameterGraph& graph, const MetricState& metric,
                                       const SurgeryConfig& cfg);

// Residual correction g_e += alpha kappa_e g_e thetabar_e^2 with
// alpha = sqrt(kappa / ||Ric||_{L2}).
MetricSurgeryResult conical_repair(const ParameterGraph& graph, const MetricState& metric,
                                   const CurvatureField& field, const SurgeryConfig& cfg);

void write_surgery_log(const std::vector<SurgeryEvent>& events, std::ostream& out);

}  // namespace ricci
