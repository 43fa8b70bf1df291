#include "ricci/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

namespace ricci {

ParameterGraph::ParameterGraph(int vertex_count, int coord_dim, int intrinsic_dim)
    : vertex_count_(vertex_count), coord_dim_(coord_dim), intrinsic_dim_(intrinsic_dim) {
  if (vertex_count < 1) throw InvalidInputError("vertex_count must be >= 1");
  if (coord_dim < 1) throw InvalidInputError("coord_dim must be >= 1");
  if (intrinsic_dim < 1) throw InvalidInputError("intrinsic_dim must be >= 1");
  coords_.assign(static_cast<size_t>(vertex_count) * coord_dim, 0.0);
  theta.assign(vertex_count, 0.0);
  adjacency_.resize(vertex_count);
}

int ParameterGraph::edge_between(int u, int v) const {
  if (u < 0 || u >= vertex_count_ || v < 0 || v >= vertex_count_) return -1;
  const auto& adj = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const int other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
  for (const auto& [nbr, eid] : adj) {
    if (nbr == other) return eid;
  }
  return -1;
}

int ParameterGraph::add_edge(int u, int v) {
  if (u < 0 || u >= vertex_count_ || v < 0 || v >= vertex_count_)
    throw InvalidInputError("edge endpoint out of range");
  if (u == v) throw InvalidInputError("self-loops are not allowed");
  if (has_edge(u, v)) throw InvalidInputError("duplicate edge");
  if (u > v) std::swap(u, v);
  const int id = static_cast<int>(edges_.size());
  edges_.push_back(Edge{u, v});
  adjacency_[u].emplace_back(v, id);
  adjacency_[v].emplace_back(u, id);
  return id;
}

double ParameterGraph::coord_dist_sq(int u, int v) const {
  double s = 0.0;
  for (int k = 0; k < coord_dim_; ++k) {
    const double d = coord(u, k) - coord(v, k);
    s += d * d;
  }
  return s;
}

void MetricState::refresh(const ParameterGraph& graph) {
  const size_t m = g.size();
  w.resize(m);
  for (size_t e = 0; e < m; ++e) {
    if (!(g[e] > 0.0) || !std::isfinite(g[e]))
      throw InvalidInputError("metric component must be positive and finite");
    w[e] = 1.0 / g[e];
  }
  vol.assign(graph.vertex_count(), 0.0);
  for (int e = 0; e < static_cast<int>(m); ++e) {
    const Edge& ed = graph.edge(e);
    vol[ed.u] += w[e];
    vol[ed.v] += w[e];
  }
}

double MetricState::edge_length(int e) const { return std::sqrt(g[e]); }

double MetricState::min_g() const {
  return g.empty() ? 0.0 : *std::min_element(g.begin(), g.end());
}

double MetricState::max_g() const {
  return g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
}

void MetricState::project_floor(const ParameterGraph& graph) {
  for (double& ge : g) ge = std::max(ge, g_floor);
  refresh(graph);
}

MetricState uniform_metric(const ParameterGraph& graph, double g0, double g_floor) {
  if (!(g0 > 0.0)) throw InvalidInputError("uniform metric needs g0 > 0");
  MetricState m;
  m.g.assign(graph.edge_count(), g0);
  m.g_floor = g_floor;
  m.refresh(graph);
  return m;
}

void VertexMeasure::validate() const {
  if (support.size() != mass.size()) throw InvalidInputError("measure support/mass size mismatch");
  double s = 0.0;
  for (double m : mass) {
    if (m < 0.0 || !std::isfinite(m)) throw InvalidInputError("measure mass must be >= 0");
    s += m;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InvalidInputError("measure masses must sum to 1");
}

MetricState init_weights(const ParameterGraph& graph, double beta_w, double g_floor) {
  if (!(beta_w > 0.0)) throw InvalidInputError("beta_w must be positive");
  for (int v = 0; v < graph.vertex_count(); ++v) {
    for (int k = 0; k < graph.coord_dim(); ++k) {
      if (!std::isfinite(graph.coord(v, k)))
        throw InvalidInputError("non-finite coordinate at vertex " + std::to_string(v));
    }
  }
  MetricState m;
  m.g_floor = g_floor;
  m.g.resize(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double we = std::exp(-beta_w * graph.coord_dist_sq(ed.u, ed.v));
    m.g[e] = std::max(1.0 / we, g_floor);
  }
  m.refresh(graph);
  return m;
}

VertexMeasure vertex_measure(const ParameterGraph& graph, const MetricState& metric, int i,
                             double alpha) {
  if (i < 0 || i >= graph.vertex_count()) throw InvalidInputError("vertex out of range");
  if (alpha < 0.0 || alpha >= 1.0) throw InvalidInputError("idleness must lie in [0,1)");
  if (graph.is_isolated(i))
    throw DegenerateVertexError("vertex " + std::to_string(i) + " is isolated");

  VertexMeasure mu;
  mu.alpha = alpha;
  double wsum = 0.0;
  for (const auto& [nbr, eid] : graph.neighbors(i)) {
    (void)nbr;
    wsum += metric.w[eid];
  }
  if (mu.alpha > 0.0) {
    mu.support.push_back(i);
    mu.mass.push_back(alpha);
  }
  for (const auto& [nbr, eid] : graph.neighbors(i)) {
    const double m = (1.0 - alpha) * metric.w[eid] / wsum;
    if (m > 0.0) {
      mu.support.push_back(nbr);
      mu.mass.push_back(m);
    }
  }
  return mu;
}

ShortestPathEngine::ShortestPathEngine(const ParameterGraph& graph, const MetricState& metric,
                                       bool hop_distance)
    : graph_(graph), metric_(metric), hop_distance_(hop_distance) {
  dist_.assign(graph.vertex_count(), 0.0);
  stamp_.assign(graph.vertex_count(), 0);
}

void ShortestPathEngine::run(int s, const std::vector<int>& targets, int needed) {
  ++epoch_;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

  // stamp == epoch: tentative distance valid; final once popped.
  dist_[s] = 0.0;
  stamp_[s] = epoch_;
  heap.emplace(0.0, s);

  int remaining = needed;
  std::vector<char> done(targets.size(), 0);
  while (!heap.empty() && remaining > 0) {
    auto [d, v] = heap.top();
    heap.pop();
    if (stamp_[v] != epoch_ || d > dist_[v]) continue;
    // v is settled; small target sets, so a linear scan is fine.
    for (size_t k = 0; k < targets.size(); ++k) {
      if (!done[k] && targets[k] == v) {
        done[k] = 1;
        --remaining;
      }
    }
    for (const auto& [nbr, eid] : graph_.neighbors(v)) {
      const double len = hop_distance_ ? 1.0 : std::sqrt(metric_.g[eid]);
      const double nd = d + len;
      if (stamp_[nbr] != epoch_ || nd < dist_[nbr]) {
        stamp_[nbr] = epoch_;
        dist_[nbr] = nd;
        heap.emplace(nd, nbr);
      }
    }
  }
}

double ShortestPathEngine::distance(int s, int t) {
  if (s == t) return 0.0;
  std::vector<int> targets{t};
  run(s, targets, 1);
  return stamp_[t] == epoch_ ? dist_[t] : std::numeric_limits<double>::infinity();
}

void ShortestPathEngine::distances(int s, const std::vector<int>& targets,
                                   std::vector<double>& out) {
  // Count distinct targets still needed (duplicates allowed in input).
  std::vector<int> uniq(targets);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  run(s, uniq, static_cast<int>(uniq.size()));
  out.resize(targets.size());
  for (size_t k = 0; k < targets.size(); ++k) {
    out[k] = stamp_[targets[k]] == epoch_ ? dist_[targets[k]]
                                          : std::numeric_limits<double>::infinity();
  }
}

double shortest_path_distance(const ParameterGraph& graph, const MetricState& metric, int i,
                              int j, bool hop_distance) {
  if (i < 0 || i >= graph.vertex_count() || j < 0 || j >= graph.vertex_count())
    throw InvalidInputError("vertex out of range");
  ShortestPathEngine engine(graph, metric, hop_distance);
  return engine.distance(i, j);
}

LoadedGraph load_graph(std::istream& in) {
  std::string line;
  int vcount = -1, dim = -1, n = -1;
  std::vector<std::string> body;
  int lineno = 0;

  // First non-comment line must be the header.
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != "V") throw InvalidInputError("graph file must start with a V header");
    if (!(ss >> vcount >> dim >> n)) throw InvalidInputError("malformed V header");
    break;
  }
  if (vcount < 1) throw InvalidInputError("graph file missing V header");

  LoadedGraph out{ParameterGraph(vcount, dim, n), false, {}};
  std::vector<char> seen(vcount, 0);
  int metric_edges = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      int id;
      if (!(ss >> id) || id < 0 || id >= vcount)
        throw InvalidInputError("bad vertex id at line " + std::to_string(lineno));
      for (int k = 0; k < dim; ++k) {
        double x;
        if (!(ss >> x)) throw InvalidInputError("missing coordinate at line " + std::to_string(lineno));
        out.graph.set_coord(id, k, x);
      }
      double th;
      if (!(ss >> th)) throw InvalidInputError("missing theta at line " + std::to_string(lineno));
      out.graph.theta[id] = th;
      seen[id] = 1;
    } else if (tag == "e") {
      int a, b;
      if (!(ss >> a >> b)) throw InvalidInputError("malformed edge at line " + std::to_string(lineno));
      out.graph.add_edge(a, b);
      double gval;
      if (ss >> gval) {
        if (!(gval > 0.0)) throw InvalidInputError("edge metric must be positive at line " +
                                                   std::to_string(lineno));
        out.g.push_back(gval);
        ++metric_edges;
      } else {
        out.g.push_back(0.0);
      }
    } else {
      throw InvalidInputError("unknown record '" + tag + "' at line " + std::to_string(lineno));
    }
  }
  for (int v = 0; v < vcount; ++v) {
    if (!seen[v]) throw InvalidInputError("vertex " + std::to_string(v) + " has no v record");
  }
  if (metric_edges != 0 && metric_edges != out.graph.edge_count())
    throw InvalidInputError("either every edge carries g or none does");
  out.has_metric = metric_edges == out.graph.edge_count() && metric_edges > 0;
  if (!out.has_metric) out.g.clear();
  return out;
}

LoadedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  return load_graph(in);
}

void save_graph(const ParameterGraph& graph, const MetricState* metric, std::ostream& out) {
  out << "V " << graph.vertex_count() << " " << graph.coord_dim() << " "
      << graph.intrinsic_dim() << "\n";
  out.precision(17);
  for (int v = 0; v < graph.vertex_count(); ++v) {
    out << "v " << v;
    for (int k = 0; k < graph.coord_dim(); ++k) out << " " << graph.coord(v, k);
    out << " " << graph.theta[v] << "\n";
  }
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    out << "e " << ed.u << " " << ed.v;
    if (metric) out << " " << metric->g[e];
    out << "\n";
  }
}

}  // namespace ricci
