#pragma once

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

struct TopologySnapshot {
  int b0 = 0;         // connected components
  int b1 = 0;         // independent cycles, |E| - |V| + b0
  int euler = 0;      // |V| - |E| = b0 - b1
  int betti_sum = 0;  // b0 + b1
  int vertices = 0;
  int edges = 0;
  double bound_rhs = 0.0;
  bool bound_satisfied = false;
  bool bound_evaluated = false;
};

// Graph Betti numbers over all vertices (isolated ones included).
TopologySnapshot betti(const ParameterGraph& graph);

// Betti numbers of the effective 1-skeleton: edges whose metric stays
// within cutoff_ratio times the median g. Edges blown up far beyond the
// bulk scale no longer count as part of the manifold.
TopologySnapshot betti_effective(const ParameterGraph& graph, const MetricState& metric,
                                 double cutoff_ratio);

// Fills the Betti-sum bound fields of `current`:
//   bound_rhs = (1/2) sum_i ric_i^2 vol_i + euler(initial)
// The bound is recorded, never enforced.
TopologySnapshot betti_bound(const TopologySnapshot& current, int initial_euler,
                             const CurvatureField& field, const MetricState& metric);

// (sum b_k(0) - sum b_k(t)) / sum b_k(0); throws UndefinedRateError when
// the initial Betti sum is zero.
double simplification_rate(const TopologySnapshot& initial, const TopologySnapshot& current);

}  // namespace ricci
