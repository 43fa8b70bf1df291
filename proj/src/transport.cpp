#include "ricci/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace ricci {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double mass_sum(const std::vector<double>& m) {
  double s = 0.0;
  for (double x : m) s += x;
  return s;
}

}  // namespace

void TransportProblem::validate() const {
  mu.validate();
  nu.validate();
  if (cost.rows() != mu.size() || cost.cols() != nu.size())
    throw InvalidInputError("cost matrix dimensions do not match supports");
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      const double c = cost(i, j);
      if (!std::isfinite(c) || c < 0.0)
        throw InvalidInputError("cost entries must be finite and nonnegative");
    }
  }
}

double sinkhorn_w1(const TransportProblem& problem) {
  problem.validate();
  if (!(problem.epsilon > 0.0)) throw InvalidInputError("sinkhorn needs epsilon > 0");
  const int n = problem.mu.size();
  const int m = problem.nu.size();
  const double eps = problem.epsilon;
  const Eigen::MatrixXd& C = problem.cost;
  const std::vector<double>& a = problem.mu.mass;
  const std::vector<double>& b = problem.nu.mass;

  std::vector<double> loga(n), logb(m);
  for (int i = 0; i < n; ++i) loga[i] = a[i] > 0.0 ? std::log(a[i]) : kNegInf;
  for (int j = 0; j < m; ++j) logb[j] = b[j] > 0.0 ? std::log(b[j]) : kNegInf;

  std::vector<double> f(n, 0.0), g(m, 0.0);
  Eigen::MatrixXd pi(n, m);

  // log-sum-exp over one column/row of (f_i + g_j - C_ij)/eps
  auto lse_over_i = [&](int j) {
    double hi = kNegInf;
    for (int i = 0; i < n; ++i) hi = std::max(hi, (f[i] - C(i, j)) / eps);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp((f[i] - C(i, j)) / eps - hi);
    return hi + std::log(s);
  };
  auto lse_over_j = [&](int i) {
    double hi = kNegInf;
    for (int j = 0; j < m; ++j) hi = std::max(hi, (g[j] - C(i, j)) / eps);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += std::exp((g[j] - C(i, j)) / eps - hi);
    return hi + std::log(s);
  };

  double violation = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < problem.max_iter; ++iter) {
    for (int j = 0; j < m; ++j) g[j] = logb[j] == kNegInf ? kNegInf : eps * (logb[j] - lse_over_i(j));
    for (int i = 0; i < n; ++i) f[i] = loga[i] == kNegInf ? kNegInf : eps * (loga[i] - lse_over_j(i));

    // After the f-update the row marginals are exact; measure both anyway.
    violation = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        const double expo = f[i] == kNegInf || g[j] == kNegInf
                                ? kNegInf
                                : (f[i] + g[j] - C(i, j)) / eps;
        pi(i, j) = expo == kNegInf ? 0.0 : std::exp(expo);
      }
    }
    for (int i = 0; i < n; ++i) violation += std::abs(pi.row(i).sum() - a[i]);
    for (int j = 0; j < m; ++j) violation += std::abs(pi.col(j).sum() - b[j]);
    if (violation < problem.tol) {
      double value = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) value += pi(i, j) * C(i, j);
      return value;
    }
  }
  throw TransportConvergenceError(
      "sinkhorn did not converge: marginal violation " + std::to_string(violation), violation);
}

namespace {

// Transportation simplex on a dense n x m problem. Basis cells form a
// spanning tree of the bipartite supply/demand graph; pivots follow
// Bland's rule (lowest entering index, lowest leaving index) so the
// method terminates and ties break deterministically.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& a, const std::vector<double>& b,
                   const Eigen::MatrixXd& C)
      : n_(static_cast<int>(a.size())), m_(static_cast<int>(b.size())), a_(a), b_(b), C_(C) {
    plan_.assign(static_cast<size_t>(n_) * m_, 0.0);
    basic_.assign(static_cast<size_t>(n_) * m_, 0);
  }

  double solve() {
    northwest_corner();
    const int max_pivots = 20000;
    for (int it = 0; it < max_pivots; ++it) {
      compute_potentials();
      int ei = -1, ej = -1;
      if (!find_entering(ei, ej)) break;
      pivot(ei, ej);
    }
    double value = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) value += plan_[idx(i, j)] * C_(i, j);
    return value;
  }

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * m_ + j; }

  void northwest_corner() {
    std::vector<double> supply(a_), demand(b_);
    int i = 0, j = 0;
    while (i < n_ && j < m_) {
      const double q = std::min(supply[i], demand[j]);
      plan_[idx(i, j)] = q;
      basic_[idx(i, j)] = 1;
      supply[i] -= q;
      demand[j] -= q;
      if (i == n_ - 1 && j == m_ - 1) break;
      // Advance; on ties move only one index so the basis keeps n+m-1
      // cells (degenerate zero cells allowed).
      if (supply[i] <= demand[j] && i < n_ - 1)
        ++i;
      else
        ++j;
    }
  }

  void compute_potentials() {
    u_.assign(n_, 0.0);
    v_.assign(m_, 0.0);
    std::vector<char> udone(n_, 0), vdone(m_, 0);
    u_[0] = 0.0;
    udone[0] = 1;
    // Propagate over the basis tree until all row/col potentials settle.
    bool progress = true;
    while (progress) {
      progress = false;
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < m_; ++j) {
          if (!basic_[idx(i, j)]) continue;
          if (udone[i] && !vdone[j]) {
            v_[j] = C_(i, j) - u_[i];
            vdone[j] = 1;
            progress = true;
          } else if (!udone[i] && vdone[j]) {
            u_[i] = C_(i, j) - v_[j];
            udone[i] = 1;
            progress = true;
          }
        }
      }
    }
  }

  bool find_entering(int& ei, int& ej) const {
    // Bland: first cell (row-major) with negative reduced cost.
    constexpr double kTol = 1e-11;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (basic_[idx(i, j)]) continue;
        if (C_(i, j) - u_[i] - v_[j] < -kTol) {
          ei = i;
          ej = j;
          return true;
        }
      }
    }
    return false;
  }

  // Find the unique cycle created by adding (ei, ej) to the basis tree:
  // alternating row/column path from row ei back to column ej.
  bool find_cycle(int ei, int ej, std::vector<std::pair<int, int>>& cycle) const {
    // DFS over basis cells; nodes are rows [0,n) and cols [n, n+m).
    std::vector<int> parent_cell_row(n_, -1), parent_cell_col(m_, -1);
    std::vector<char> rvis(n_, 0), cvis(m_, 0);
    std::vector<int> stack;
    rvis[ei] = 1;
    stack.push_back(ei);  // row nodes encoded as i, col nodes as n_+j
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      if (node < n_) {
        const int i = node;
        for (int j = 0; j < m_; ++j) {
          if (!basic_[idx(i, j)] || cvis[j]) continue;
          cvis[j] = 1;
          parent_cell_col[j] = i;
          if (j == ej) {
            stack.clear();
            break;
          }
          stack.push_back(n_ + j);
        }
      } else {
        const int j = node - n_;
        for (int i = 0; i < n_; ++i) {
          if (!basic_[idx(i, j)] || rvis[i]) continue;
          rvis[i] = 1;
          parent_cell_row[i] = j;
          stack.push_back(i);
        }
      }
      if (cvis[ej]) break;
    }
    if (!cvis[ej]) return false;

    // Walk back from column ej to row ei, collecting basis cells.
    cycle.clear();
    cycle.emplace_back(ei, ej);  // entering cell, gets +theta
    int j = ej;
    while (true) {
      const int i = parent_cell_col[j];
      cycle.emplace_back(i, j);  // -theta
      if (i == ei) break;
      j = parent_cell_row[i];
      cycle.emplace_back(i, j);  // +theta
    }
    return true;
  }

  void pivot(int ei, int ej) {
    std::vector<std::pair<int, int>> cycle;
    if (!find_cycle(ei, ej, cycle))
      throw Error("transport simplex: basis is not a spanning tree");

    // Odd positions in the cycle get -theta; pick the tightest, breaking
    // ties by lowest (row, col).
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (size_t k = 1; k < cycle.size(); k += 2) {
      const auto& [i, j] = cycle[k];
      const double q = plan_[idx(i, j)];
      if (q < theta - 1e-15 ||
          (std::abs(q - theta) <= 1e-15 && leave >= 0 &&
           std::make_pair(i, j) < cycle[static_cast<size_t>(leave)])) {
        theta = q;
        leave = static_cast<int>(k);
      }
    }
    for (size_t k = 0; k < cycle.size(); ++k) {
      const auto& [i, j] = cycle[k];
      if (k % 2 == 0)
        plan_[idx(i, j)] += theta;
      else
        plan_[idx(i, j)] -= theta;
    }
    const auto& [li, lj] = cycle[static_cast<size_t>(leave)];
    plan_[idx(li, lj)] = 0.0;
    basic_[idx(li, lj)] = 0;
    basic_[idx(ei, ej)] = 1;
  }

  int n_, m_;
  const std::vector<double>& a_;
  const std::vector<double>& b_;
  const Eigen::MatrixXd& C_;
  std::vector<double> plan_;
  std::vector<char> basic_;
  std::vector<double> u_, v_;
};

}  // namespace

double exact_w1(const TransportProblem& problem) {
  problem.validate();
  if (problem.mu.size() > kExactW1MaxSupport || problem.nu.size() > kExactW1MaxSupport)
    throw SizeLimitError("exact_w1 supports at most 16 points per measure");

  // Drop zero-mass entries; they do not affect the optimum but would
  // add degenerate basis cells.
  std::vector<double> a, b;
  std::vector<int> arows, bcols;
  for (int i = 0; i < problem.mu.size(); ++i) {
    if (problem.mu.mass[i] > 0.0) {
      a.push_back(problem.mu.mass[i]);
      arows.push_back(i);
    }
  }
  for (int j = 0; j < problem.nu.size(); ++j) {
    if (problem.nu.mass[j] > 0.0) {
      b.push_back(problem.nu.mass[j]);
      bcols.push_back(j);
    }
  }
  // Rebalance tiny rounding mismatch between the marginals: scale b to
  // the exact sum of a.
  const double sa = mass_sum(a), sb = mass_sum(b);
  if (sb > 0.0 && sa != sb) {
    const double scale = sa / sb;
    for (double& x : b) x *= scale;
  }
  Eigen::MatrixXd C(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) C(i, j) = problem.cost(arows[i], bcols[j]);

  TransportSimplex simplex(a, b, C);
  return simplex.solve();
}

}  // namespace ricci
