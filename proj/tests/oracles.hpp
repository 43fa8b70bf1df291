// Test-only oracles: independent straight-line reimplementations used to
// cross-check the library. Nothing here shares code with src/.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "ricci/flow.hpp"
#include "ricci/graph.hpp"

namespace oracles {

// Exact W1 by enumerating basic feasible solutions of the transport
// polytope: every (n+m-1)-subset of cells that forms a spanning tree of
// the bipartite graph yields one candidate vertex. Feasible candidates
// are scored and the minimum taken. Exponential; keep supports <= 4.
inline double brute_force_w1(const std::vector<double>& a, const std::vector<double>& b,
                             const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int cells = n * m;
  const int basis_size = n + m - 1;
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> pick(basis_size);
  // Enumerate subsets via combinations.
  std::vector<int> idx(basis_size);
  for (int i = 0; i < basis_size; ++i) idx[i] = i;

  auto evaluate = [&](const std::vector<int>& subset) {
    // Solve for the flows by repeated leaf elimination.
    std::vector<double> supply(a), demand(b);
    std::vector<int> rows(subset.size()), cols(subset.size());
    std::vector<char> used(subset.size(), 0);
    for (size_t k = 0; k < subset.size(); ++k) {
      rows[k] = subset[k] / m;
      cols[k] = subset[k] % m;
    }
    std::vector<double> flow(subset.size(), 0.0);
    int remaining = static_cast<int>(subset.size());
    while (remaining > 0) {
      bool progress = false;
      for (size_t k = 0; k < subset.size(); ++k) {
        if (used[k]) continue;
        // Count remaining cells in this row / column.
        int row_count = 0, col_count = 0;
        for (size_t l = 0; l < subset.size(); ++l) {
          if (used[l]) continue;
          if (rows[l] == rows[k]) ++row_count;
          if (cols[l] == cols[k]) ++col_count;
        }
        if (row_count == 1) {
          flow[k] = supply[rows[k]];
          demand[cols[k]] -= flow[k];
          supply[rows[k]] = 0.0;
          used[k] = 1;
          --remaining;
          progress = true;
        } else if (col_count == 1) {
          flow[k] = demand[cols[k]];
          supply[rows[k]] -= flow[k];
          demand[cols[k]] = 0.0;
          used[k] = 1;
          --remaining;
          progress = true;
        }
      }
      if (!progress) return;  // contains a cycle: not a tree, skip
    }
    double cost = 0.0;
    for (size_t k = 0; k < subset.size(); ++k) {
      if (flow[k] < -1e-9) return;  // infeasible vertex
      cost += std::max(flow[k], 0.0) * C(rows[k], cols[k]);
    }
    if (cost < best) best = cost;
  };

  // Standard combination enumeration.
  while (true) {
    evaluate(idx);
    int i = basis_size - 1;
    while (i >= 0 && idx[i] == cells - basis_size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < basis_size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

// Brute-force Bochner terms recomputed from first principles (plain
// curvature-term variant).
struct BochnerOracle {
  std::vector<double> gamma2, hessian_sq, curvature_term, residual;
};

inline BochnerOracle brute_force_bochner(const ricci::ParameterGraph& graph,
                                         const ricci::MetricState& metric,
                                         const std::vector<double>& f,
                                         const std::vector<double>& ric_vertex) {
  const int nv = graph.vertex_count();
  auto w_between = [&](int i, int j) {
    const int e = graph.edge_between(i, j);
    return e >= 0 ? metric.w[e] : 0.0;
  };
  auto neighbors = [&](int i) {
    std::vector<int> out;
    for (const auto& [nbr, eid] : graph.neighbors(i)) out.push_back(nbr);
    return out;
  };

  std::vector<double> lap(nv, 0.0), gradsq(nv, 0.0);
  for (int i = 0; i < nv; ++i) {
    for (int j : neighbors(i)) {
      lap[i] += w_between(i, j) * (f[j] - f[i]);
      gradsq[i] += w_between(i, j) * (f[j] - f[i]) * (f[j] - f[i]);
    }
  }

  BochnerOracle out;
  out.gamma2.assign(nv, 0.0);
  out.hessian_sq.assign(nv, 0.0);
  out.curvature_term.assign(nv, 0.0);
  out.residual.assign(nv, 0.0);
  for (int i = 0; i < nv; ++i) {
    double lap_gradsq = 0.0, inner = 0.0, hess = 0.0;
    for (int j : neighbors(i)) {
      lap_gradsq += w_between(i, j) * (gradsq[j] - gradsq[i]);
      inner += w_between(i, j) * (f[j] - f[i]) * (lap[j] - lap[i]);
      hess += 0.5 * w_between(i, j) * (lap[j] - lap[i]) * (lap[j] - lap[i]);
    }
    out.gamma2[i] = 0.5 * lap_gradsq - inner;
    out.hessian_sq[i] = hess;
    out.curvature_term[i] = ric_vertex[i] * gradsq[i];
    out.residual[i] = out.gamma2[i] - out.hessian_sq[i] - out.curvature_term[i];
  }
  return out;
}

// b1 via GF(2) rank of the edge-vertex incidence matrix:
// b1 = |E| - rank, independent of the union-find route.
inline int cycle_rank_gf2(const ricci::ParameterGraph& graph) {
  const int nv = graph.vertex_count();
  const int ne = graph.edge_count();
  // Each edge is a row of the incidence matrix over GF(2).
  std::vector<std::vector<char>> rows(ne, std::vector<char>(nv, 0));
  for (int e = 0; e < ne; ++e) {
    rows[e][graph.edge(e).u] = 1;
    rows[e][graph.edge(e).v] = 1;
  }
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < nv && rank < ne; ++col) {
    int pivot = -1;
    for (int r = rank; r < ne; ++r) {
      if (rows[r][col]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < ne; ++r) {
      if (r != rank && rows[r][col]) {
        for (int c = 0; c < nv; ++c) rows[r][c] ^= rows[rank][c];
      }
    }
    ++rank;
  }
  return ne - rank;
}

// Central-difference gradient of a loss oracle.
inline std::vector<double> fd_gradient(const ricci::LossOracle& loss,
                                       const std::vector<double>& theta, double h = 1e-6) {
  std::vector<double> out(theta.size());
  std::vector<double> x(theta);
  for (size_t i = 0; i < theta.size(); ++i) {
    const double hi = h * (1.0 + std::abs(theta[i]));
    x[i] = theta[i] + hi;
    const double up = loss.value(x);
    x[i] = theta[i] - hi;
    const double down = loss.value(x);
    x[i] = theta[i];
    out[i] = (up - down) / (2.0 * hi);
  }
  return out;
}

}  // namespace oracles
