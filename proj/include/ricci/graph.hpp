#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ricci/errors.hpp"

namespace ricci {

// Undirected edge, stored with u < v.
struct Edge {
  int u;
  int v;
};

// The discrete parameter manifold: an undirected graph whose vertices
// carry coordinates in R^d and a scalar parameter theta. The structure
// is immutable except through surgery (add_edge).
class ParameterGraph {
 public:
  ParameterGraph(int vertex_count, int coord_dim, int intrinsic_dim);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int coord_dim() const { return coord_dim_; }
  int intrinsic_dim() const { return intrinsic_dim_; }

  double coord(int v, int k) const { return coords_[static_cast<size_t>(v) * coord_dim_ + k]; }
  void set_coord(int v, int k, double x) { coords_[static_cast<size_t>(v) * coord_dim_ + k] = x; }

  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Neighbors of v as (neighbor vertex, edge id) pairs.
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool is_isolated(int v) const { return adjacency_[v].empty(); }

  // Edge id between u and v, or -1.
  int edge_between(int u, int v) const;
  bool has_edge(int u, int v) const { return edge_between(u, v) >= 0; }

  // Appends an edge and returns its id. Rejects self-loops, duplicates
  // and out-of-range endpoints.
  int add_edge(int u, int v);

  // Squared Euclidean distance between vertex coordinates.
  double coord_dist_sq(int u, int v) const;

  // Per-vertex parameter values.
  std::vector<double> theta;

 private:
  int vertex_count_;
  int coord_dim_;
  int intrinsic_dim_;
  std::vector<double> coords_;  // row-major vertex_count x coord_dim
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

// Per-edge diagonal metric together with the derived quantities used
// everywhere else: weights w = 1/g, vertex volumes vol_i = sum of
// incident w, and edge lengths sqrt(g).
struct MetricState {
  std::vector<double> g;
  double g_floor = 1e-6;

  // Derived; kept consistent by refresh().
  std::vector<double> w;
  std::vector<double> vol;

  void refresh(const ParameterGraph& graph);

  double edge_length(int e) const;
  double min_g() const;
  double max_g() const;

  // Clamps every g below the floor up to it, then refreshes.
  void project_floor(const ParameterGraph& graph);
};

// Uniform metric g_e = g0 on every edge.
MetricState uniform_metric(const ParameterGraph& graph, double g0, double g_floor = 1e-6);

// Probability measure concentrated near one vertex.
struct VertexMeasure {
  std::vector<int> support;   // distinct vertex ids
  std::vector<double> mass;   // nonnegative, sums to 1
  double alpha = 0.0;         // idleness used to build it

  int size() const { return static_cast<int>(support.size()); }
  void validate() const;
};

// Gaussian edge weights w_e = exp(-beta_w * |x_i - x_j|^2), g_e = 1/w_e.
MetricState init_weights(const ParameterGraph& graph, double beta_w, double g_floor = 1e-6);

// Lazy random walk measure: mass alpha at i, the rest split over the
// neighbors proportionally to w. Entries with zero mass are dropped.
VertexMeasure vertex_measure(const ParameterGraph& graph, const MetricState& metric, int i,
                             double alpha);

// Dijkstra over edge lengths sqrt(g_e) (or hop counts). Reusable across
// queries on the same graph+metric; not thread safe.
class ShortestPathEngine {
 public:
  ShortestPathEngine(const ParameterGraph& graph, const MetricState& metric,
                     bool hop_distance = false);

  // Distance from s to t; +infinity when disconnected.
  double distance(int s, int t);

  // Distances from s to every vertex in targets, stopping as soon as all
  // of them are settled. Unreachable targets get +infinity.
  void distances(int s, const std::vector<int>& targets, std::vector<double>& out);

 private:
  void run(int s, const std::vector<int>& targets, int needed);

  const ParameterGraph& graph_;
  const MetricState& metric_;
  bool hop_distance_;
  std::vector<double> dist_;
  std::vector<uint32_t> stamp_;
  uint32_t epoch_ = 0;
};

// One-shot convenience wrapper around ShortestPathEngine.
double shortest_path_distance(const ParameterGraph& graph, const MetricState& metric, int i,
                              int j, bool hop_distance = false);

// Line-oriented graph file:
//   V <count> <dim> <n>
//   v <id> <x_1> ... <x_d> <theta>
//   e <i> <j> [g]
// Either every edge carries g or none does; in the latter case callers
// run init_weights.
struct LoadedGraph {
  ParameterGraph graph;
  bool has_metric = false;
  std::vector<double> g;  // per-edge, valid when has_metric
};

LoadedGraph load_graph(std::istream& in);
LoadedGraph load_graph_file(const std::string& path);
void save_graph(const ParameterGraph& graph, const MetricState* metric, std::ostream& out);

}  // namespace ricci
