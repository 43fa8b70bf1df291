#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "ricci/rng.hpp"
#include "ricci/topology.hpp"

using namespace ricci;

namespace {

ParameterGraph random_graph(Rng& rng, int nv, double edge_prob) {
  ParameterGraph g(nv, 1, 2);
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v)
      if (rng.uniform() < edge_prob) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("betti: cycle, tree, disjoint triangles") {
  ParameterGraph c4(4, 1, 2);
  for (int v = 0; v < 4; ++v) c4.add_edge(v, (v + 1) % 4);
  TopologySnapshot s = betti(c4);
  CHECK(s.b0 == 1);
  CHECK(s.b1 == 1);
  CHECK(s.euler == 0);
  CHECK(s.betti_sum == 2);

  ParameterGraph tree(5, 1, 2);
  tree.add_edge(0, 1);
  tree.add_edge(0, 2);
  tree.add_edge(2, 3);
  tree.add_edge(2, 4);
  TopologySnapshot t = betti(tree);
  CHECK(t.b0 == 1);
  CHECK(t.b1 == 0);

  ParameterGraph two(6, 1, 2);
  two.add_edge(0, 1);
  two.add_edge(1, 2);
  two.add_edge(0, 2);
  two.add_edge(3, 4);
  two.add_edge(4, 5);
  two.add_edge(3, 5);
  TopologySnapshot d = betti(two);
  CHECK(d.b0 == 2);
  CHECK(d.b1 == 2);
  CHECK(d.euler == 0);
}

TEST_CASE("isolated vertices count toward b0") {
  ParameterGraph g(4, 1, 2);
  g.add_edge(0, 1);
  TopologySnapshot s = betti(g);
  CHECK(s.b0 == 3);
  CHECK(s.b1 == 0);
}

TEST_CASE("b1 identity cross-checked against GF(2) cycle rank") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int nv = 2 + static_cast<int>(rng.index(29));
    ParameterGraph g = random_graph(rng, nv, rng.uniform(0.05, 0.4));
    TopologySnapshot s = betti(g);
    CHECK(s.b1 == g.edge_count() - nv + s.b0);
    CHECK(s.b1 == oracles::cycle_rank_gf2(g));
    CHECK(s.euler == s.b0 - s.b1);
  }
}

TEST_CASE("bridge vs cycle edge removal") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    ParameterGraph g = random_graph(rng, 10, 0.3);
    if (g.edge_count() == 0) continue;
    const int drop = static_cast<int>(rng.index(g.edge_count()));
    TopologySnapshot before = betti(g);

    ParameterGraph h(g.vertex_count(), 1, 2);
    for (int e = 0; e < g.edge_count(); ++e) {
      if (e == drop) continue;
      h.add_edge(g.edge(e).u, g.edge(e).v);
    }
    TopologySnapshot after = betti(h);
    if (after.b0 == before.b0 + 1) {
      CHECK(after.b1 == before.b1);  // bridge
    } else {
      CHECK(after.b0 == before.b0);
      CHECK(after.b1 == before.b1 - 1);  // cycle edge
    }
  }
}

TEST_CASE("betti_bound: K3 fixture violates the bound with chi0 = 0") {
  ParameterGraph k3(3, 1, 2);
  k3.add_edge(0, 1);
  k3.add_edge(1, 2);
  k3.add_edge(0, 2);
  MetricState m = uniform_metric(k3, 1.0);
  CurvatureField f;
  f.kappa.assign(3, 0.5);
  f.ric_vertex.assign(3, 0.5);
  f.ric_edge.assign(3, 0.5);
  f.grad_ric.assign(3, 0.0);

  TopologySnapshot now = betti(k3);
  TopologySnapshot checked = betti_bound(now, /*initial_euler=*/0, f, m);
  CHECK(checked.bound_rhs == doctest::Approx(0.75));
  CHECK(checked.betti_sum == 2);
  CHECK_FALSE(checked.bound_satisfied);
  CHECK(checked.bound_evaluated);
}

TEST_CASE("betti_bound: trees with chi0 = 1 are satisfied") {
  ParameterGraph tree(4, 1, 2);
  tree.add_edge(0, 1);
  tree.add_edge(1, 2);
  tree.add_edge(1, 3);
  MetricState m = uniform_metric(tree, 1.0);
  CurvatureField f;
  f.kappa.assign(3, 0.2);
  f.ric_vertex.assign(4, 0.2);
  f.ric_edge.assign(3, 0.2);
  f.grad_ric.assign(3, 0.0);
  TopologySnapshot s = betti_bound(betti(tree), 1, f, m);
  CHECK(s.betti_sum == 1);
  CHECK(s.bound_satisfied);
}

TEST_CASE("betti_bound: zero curvature degenerates to betti_sum <= chi0") {
  ParameterGraph c4(4, 1, 2);
  for (int v = 0; v < 4; ++v) c4.add_edge(v, (v + 1) % 4);
  MetricState m = uniform_metric(c4, 1.0);
  CurvatureField f;
  f.kappa.assign(4, 0.0);
  f.ric_vertex.assign(4, 0.0);
  f.ric_edge.assign(4, 0.0);
  f.grad_ric.assign(4, 0.0);
  TopologySnapshot a = betti_bound(betti(c4), 2, f, m);
  CHECK(a.bound_satisfied);  // betti_sum 2 <= 2
  TopologySnapshot b = betti_bound(betti(c4), 1, f, m);
  CHECK_FALSE(b.bound_satisfied);
}

TEST_CASE("simplification_rate arithmetic and errors") {
  TopologySnapshot s0, st;
  s0.betti_sum = 8;
  st.betti_sum = 3;
  CHECK(simplification_rate(s0, st) == doctest::Approx(0.625));
  CHECK(simplification_rate(s0, s0) == 0.0);

  st.betti_sum = 12;
  CHECK(simplification_rate(s0, st) < 0.0);  // topology grew

  TopologySnapshot zero;
  zero.betti_sum = 0;
  CHECK_THROWS_AS(simplification_rate(zero, st), UndefinedRateError);
}

TEST_CASE("simplification_rate stays below 1 for nonempty graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    ParameterGraph g0 = random_graph(rng, 8, 0.4);
    ParameterGraph g1 = random_graph(rng, 8, 0.2);
    TopologySnapshot s0 = betti(g0);
    TopologySnapshot s1 = betti(g1);
    if (s0.betti_sum == 0) continue;
    CHECK(simplification_rate(s0, s1) < 1.0);  // b0 >= 1 always
  }
}

TEST_CASE("effective topology drops blown-up edges") {
  // Ring of 5 plus one chord whose metric is pushed far beyond the bulk.
  ParameterGraph g(5, 1, 2);
  for (int v = 0; v < 5; ++v) g.add_edge(v, (v + 1) % 5);
  g.add_edge(0, 2);
  MetricState m = uniform_metric(g, 1.0);

  TopologySnapshot all = betti_effective(g, m, 100.0);
  CHECK(all.b1 == 2);
  CHECK(all.edges == 6);

  m.g[5] = 1e6;  // chord blows up
  m.refresh(g);
  TopologySnapshot eff = betti_effective(g, m, 100.0);
  CHECK(eff.b1 == 1);
  CHECK(eff.edges == 5);
  CHECK(eff.b0 == 1);
  // raw counts unchanged
  CHECK(betti(g).b1 == 2);
}
