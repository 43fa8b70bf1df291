#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ricci/graph.hpp"
#include "ricci/rng.hpp"

using namespace ricci;

namespace {

ParameterGraph two_vertices(double x0, double x1) {
  ParameterGraph g(2, 1, 1);
  g.set_coord(0, 0, x0);
  g.set_coord(1, 0, x1);
  g.add_edge(0, 1);
  return g;
}

ParameterGraph random_graph(Rng& rng, int nv, double edge_prob) {
  ParameterGraph g(nv, 2, 2);
  for (int v = 0; v < nv; ++v) {
    g.set_coord(v, 0, rng.uniform());
    g.set_coord(v, 1, rng.uniform());
  }
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v)
      if (rng.uniform() < edge_prob) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("graph construction rejects bad edges") {
  ParameterGraph g(3, 1, 1);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(g.add_edge(1, 1), InvalidInputError);
  CHECK_THROWS_AS(g.add_edge(0, 1), InvalidInputError);
  CHECK_THROWS_AS(g.add_edge(1, 0), InvalidInputError);  // duplicate, reversed
  CHECK_THROWS_AS(g.add_edge(0, 7), InvalidInputError);
  CHECK(g.edge_count() == 1);
  CHECK(g.edge_between(1, 0) == 0);
  CHECK(g.edge_between(0, 2) == -1);
}

TEST_CASE("init_weights: identical coordinates give w = g = 1") {
  ParameterGraph g = two_vertices(0.5, 0.5);
  MetricState m = init_weights(g, 1.0);
  CHECK(m.w[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.g[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("init_weights: unit distance, beta 1") {
  ParameterGraph g = two_vertices(0.0, 1.0);
  MetricState m = init_weights(g, 1.0);
  CHECK(m.w[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(m.g[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("init_weights: beta_w used verbatim") {
  // beta_w = 0.1 sqrt(n) with n = 4 gives 0.2.
  ParameterGraph g = two_vertices(0.0, 1.0);
  const double beta_w = 0.1 * std::sqrt(4.0);
  CHECK(beta_w == doctest::Approx(0.2).epsilon(1e-15));
  MetricState m = init_weights(g, beta_w);
  CHECK(m.w[0] == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
}

TEST_CASE("init_weights rejects non-finite coordinates") {
  ParameterGraph g = two_vertices(0.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(init_weights(g, 1.0), InvalidInputError);
}

TEST_CASE("metric derived fields stay consistent") {
  Rng rng(11);
  ParameterGraph g = random_graph(rng, 10, 0.4);
  MetricState m = init_weights(g, 0.3);
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(m.g[e] * m.w[e] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.edge_length(e) == doctest::Approx(std::sqrt(m.g[e])));
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    double acc = 0.0;
    for (const auto& [nbr, eid] : g.neighbors(v)) acc += m.w[eid];
    CHECK(m.vol[v] == doctest::Approx(acc).epsilon(1e-14));
  }
}

TEST_CASE("vertex_measure: K2 with alpha 0.5") {
  ParameterGraph g = two_vertices(0.0, 0.0);
  MetricState m = uniform_metric(g, 1.0);
  VertexMeasure mu = vertex_measure(g, m, 0, 0.5);
  REQUIRE(mu.size() == 2);
  CHECK(mu.support[0] == 0);
  CHECK(mu.mass[0] == doctest::Approx(0.5));
  CHECK(mu.mass[1] == doctest::Approx(0.5));
}

TEST_CASE("vertex_measure: star center, alpha 0") {
  ParameterGraph g(4, 1, 1);
  for (int leaf = 1; leaf < 4; ++leaf) g.add_edge(0, leaf);
  MetricState m = uniform_metric(g, 1.0);
  VertexMeasure mu = vertex_measure(g, m, 0, 0.0);
  REQUIRE(mu.size() == 3);
  for (double mass : mu.mass) CHECK(mass == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("vertex_measure: weight-proportional split") {
  // path a-b-c with w_ab = 1, w_bc = 3: measure at b is {a: 0.25, c: 0.75}.
  ParameterGraph g(3, 1, 1);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  MetricState m;
  m.g = {1.0, 1.0 / 3.0};
  m.refresh(g);
  VertexMeasure mu = vertex_measure(g, m, 1, 0.0);
  REQUIRE(mu.size() == 2);
  CHECK(mu.support[0] == 0);
  CHECK(mu.mass[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(mu.mass[1] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("vertex_measure rejects isolated vertices") {
  ParameterGraph g(3, 1, 1);
  g.add_edge(0, 1);
  MetricState m = uniform_metric(g, 1.0);
  CHECK_THROWS_AS(vertex_measure(g, m, 2, 0.5), DegenerateVertexError);
}

TEST_CASE("measure masses sum to one on random graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterGraph g = random_graph(rng, 8, 0.5);
    MetricState m = init_weights(g, 0.7);
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.is_isolated(v)) continue;
      VertexMeasure mu = vertex_measure(g, m, v, rng.uniform(0.0, 0.9));
      double sum = 0.0;
      for (double mass : mu.mass) sum += mass;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("shortest paths: identity, edge length, two-hop detour") {
  ParameterGraph g(3, 1, 1);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  MetricState m;
  m.g = {1.0, 1.0, 9.0};  // lengths 1, 1, 3
  m.refresh(g);
  CHECK(shortest_path_distance(g, m, 1, 1) == 0.0);
  CHECK(shortest_path_distance(g, m, 0, 1) == doctest::Approx(1.0));
  // direct edge has length 3; the detour wins
  CHECK(shortest_path_distance(g, m, 0, 2) == doctest::Approx(2.0));
}

TEST_CASE("single edge distance is sqrt(g)") {
  ParameterGraph g = two_vertices(0.0, 0.0);
  MetricState m = uniform_metric(g, 4.0);
  CHECK(shortest_path_distance(g, m, 0, 1) == doctest::Approx(2.0));
}

TEST_CASE("disconnected pairs give the infinity sentinel") {
  ParameterGraph g(4, 1, 1);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  MetricState m = uniform_metric(g, 1.0);
  CHECK(std::isinf(shortest_path_distance(g, m, 0, 3)));
}

TEST_CASE("shortest-path distance is a metric on random graphs") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    ParameterGraph g = random_graph(rng, 12, 0.35);
    MetricState m = init_weights(g, 0.5);
    ShortestPathEngine engine(g, m);
    const int nv = g.vertex_count();
    std::vector<std::vector<double>> d(nv, std::vector<double>(nv, 0.0));
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) d[i][j] = shortest_path_distance(g, m, i, j);
    for (int i = 0; i < nv; ++i) {
      CHECK(d[i][i] == 0.0);
      for (int j = 0; j < nv; ++j) {
        if (std::isinf(d[i][j])) {
          CHECK(std::isinf(d[j][i]));
        } else {
          CHECK(d[i][j] == doctest::Approx(d[j][i]).epsilon(1e-12));
        }
        for (int k = 0; k < nv; ++k) {
          if (std::isfinite(d[i][j]) && std::isfinite(d[j][k]))
            CHECK(d[i][k] <= d[i][j] + d[j][k] + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("graph file round trip") {
  std::string text =
      "# toy graph\n"
      "V 3 2 2\n"
      "v 0 0.0 0.0 1.5\n"
      "v 1 1.0 0.0 -2.0\n"
      "v 2 0.0 1.0 0.25\n"
      "e 0 1 2.5\n"
      "e 1 2 4.0\n";
  std::istringstream in(text);
  LoadedGraph loaded = load_graph(in);
  CHECK(loaded.graph.vertex_count() == 3);
  CHECK(loaded.graph.edge_count() == 2);
  CHECK(loaded.graph.intrinsic_dim() == 2);
  CHECK(loaded.graph.theta[1] == doctest::Approx(-2.0));
  REQUIRE(loaded.has_metric);
  CHECK(loaded.g[0] == doctest::Approx(2.5));

  MetricState m;
  m.g = loaded.g;
  m.refresh(loaded.graph);
  std::ostringstream out;
  save_graph(loaded.graph, &m, out);
  std::istringstream in2(out.str());
  LoadedGraph again = load_graph(in2);
  CHECK(again.graph.edge_count() == 2);
  CHECK(again.g[1] == doctest::Approx(4.0));
}

TEST_CASE("graph file without metric triggers init_weights path") {
  std::string text = "V 2 1 1\nv 0 0 0\nv 1 1 0\ne 0 1\n";
  std::istringstream in(text);
  LoadedGraph loaded = load_graph(in);
  CHECK_FALSE(loaded.has_metric);
}

TEST_CASE("graph file rejects mixed metric annotations") {
  std::string text = "V 3 1 1\nv 0 0 0\nv 1 1 0\nv 2 2 0\ne 0 1 2.0\ne 1 2\n";
  std::istringstream in(text);
  CHECK_THROWS_AS(load_graph(in), InvalidInputError);
}

TEST_CASE("graph file rejects malformed input") {
  std::istringstream no_header("v 0 0 0\n");
  CHECK_THROWS_AS(load_graph(no_header), InvalidInputError);
  std::istringstream bad_vertex("V 2 1 1\nv 0 0 0\nv 9 1 0\ne 0 1\n");
  CHECK_THROWS_AS(load_graph(bad_vertex), InvalidInputError);
  std::istringstream missing_vertex("V 2 1 1\nv 0 0 0\ne 0 1\n");
  CHECK_THROWS_AS(load_graph(missing_vertex), InvalidInputError);
}
