#include "ricci/topology.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace ricci {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

TopologySnapshot snapshot_from_edges(const ParameterGraph& graph,
                                     const std::vector<int>& edge_ids) {
  UnionFind uf(graph.vertex_count());
  int components = graph.vertex_count();
  for (int e : edge_ids) {
    const Edge& ed = graph.edge(e);
    if (uf.unite(ed.u, ed.v)) --components;
  }
  TopologySnapshot s;
  s.vertices = graph.vertex_count();
  s.edges = static_cast<int>(edge_ids.size());
  s.b0 = components;
  s.b1 = s.edges - s.vertices + s.b0;
  s.euler = s.vertices - s.edges;
  s.betti_sum = s.b0 + s.b1;
  return s;
}

}  // namespace

TopologySnapshot betti(const ParameterGraph& graph) {
  std::vector<int> all(graph.edge_count());
  std::iota(all.begin(), all.end(), 0);
  return snapshot_from_edges(graph, all);
}

TopologySnapshot betti_effective(const ParameterGraph& graph, const MetricState& metric,
                                 double cutoff_ratio) {
  if (!(cutoff_ratio > 0.0)) throw InvalidInputError("cutoff_ratio must be positive");
  if (graph.edge_count() == 0) return betti(graph);

  std::vector<double> sorted(metric.g);
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  const double median =
      m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  const double cutoff = cutoff_ratio * median;

  std::vector<int> kept;
  kept.reserve(m);
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (metric.g[e] <= cutoff) kept.push_back(e);
  }
  return snapshot_from_edges(graph, kept);
}

TopologySnapshot betti_bound(const TopologySnapshot& current, int initial_euler,
                             const CurvatureField& field, const MetricState& metric) {
  TopologySnapshot out = current;
  double integral = 0.0;
  for (size_t i = 0; i < field.ric_vertex.size(); ++i)
    integral += field.ric_vertex[i] * field.ric_vertex[i] * metric.vol[i];
  out.bound_rhs = 0.5 * integral + initial_euler;
  out.bound_satisfied = out.betti_sum <= out.bound_rhs;
  out.bound_evaluated = true;
  return out;
}

double simplification_rate(const TopologySnapshot& initial, const TopologySnapshot& current) {
  if (initial.betti_sum == 0)
    throw UndefinedRateError("simplification rate undefined: zero initial Betti sum");
  return static_cast<double>(initial.betti_sum - current.betti_sum) /
         static_cast<double>(initial.betti_sum);
}

}  // namespace ricci
