#include "ricci/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace ricci {

void HoloConfig::validate(int vertex_count) const {
  if (p_drop < 0.0 || p_drop > 1.0) throw InvalidInputError("p_drop must lie in [0,1]");
  if (!(g_newton > 0.0) || !(hbar > 0.0)) throw InvalidInputError("constants must be positive");
  if (!(eps_quantum > 0.0) || !(eps_quantum < 1.0))
    throw InvalidInputError("eps_quantum must lie in (0,1)");
  for (int v : region) {
    if (v < 0 || v >= vertex_count) throw InvalidInputError("region vertex out of range");
  }
}

double entanglement_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidInputError("probability must lie in [0,1]");
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
  return s;
}

EntanglementBound entanglement_bound(const ParameterGraph& graph, const MetricState& metric,
                                     const HoloConfig& cfg) {
  cfg.validate(graph.vertex_count());
  if (cfg.region.empty() || static_cast<int>(cfg.region.size()) >= graph.vertex_count())
    throw BoundaryUndefinedError("region must be a nonempty proper vertex subset");

  std::vector<char> inside(graph.vertex_count(), 0);
  for (int v : cfg.region) inside[v] = 1;

  EntanglementBound out;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    if (inside[ed.u] != inside[ed.v]) out.area += metric.w[e];
  }
  out.s_ent = entanglement_entropy(cfg.p_drop);
  out.bound = out.area / (4.0 * cfg.g_newton);
  out.satisfied = out.s_ent <= out.bound;
  out.rho_e = out.bound > 0.0 ? out.s_ent / out.bound
                              : (out.s_ent == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return out;
}

double geometric_distortion(const ParameterGraph& graph, const MetricState& current,
                            const MetricState& reference) {
  if (current.g.size() != reference.g.size() ||
      current.g.size() != static_cast<size_t>(graph.edge_count()))
    throw InvalidInputError("geometric_distortion needs matching edge sets");

  std::vector<double> acc(graph.vertex_count(), 0.0);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    const double d = current.g[e] - reference.g[e];
    acc[ed.u] += d * d;
    acc[ed.v] += d * d;
  }
  double total = 0.0;
  for (double a : acc) total += std::sqrt(a);
  return total / graph.vertex_count();
}

RobustnessBound robustness_bound(double l_lip, double rho, double lambda_min_hess) {
  if (!(l_lip >= 0.0) || !(rho >= 0.0)) throw InvalidInputError("L and rho must be nonnegative");
  RobustnessBound out;
  if (!(lambda_min_hess > 0.0)) {
    out.unbounded = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = 2.0 * l_lip * rho / std::sqrt(lambda_min_hess);
  return out;
}

DecoherenceTime decoherence_time(const CurvatureField& field, const MetricState& metric,
                                 const HoloConfig& cfg) {
  if (!(cfg.hbar > 0.0) || !(cfg.eps_quantum > 0.0) || !(cfg.eps_quantum < 1.0))
    throw InvalidInputError("bad decoherence constants");
  double trace = 0.0;
  for (size_t i = 0; i < field.ric_vertex.size(); ++i)
    trace += field.ric_vertex[i] * field.ric_vertex[i] * metric.vol[i];
  DecoherenceTime out;
  if (!(trace > 0.0)) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = cfg.hbar / std::sqrt(trace) * std::log(1.0 / cfg.eps_quantum);
  return out;
}

std::vector<double> finite_difference_hessian(const LossOracle& loss,
                                              const std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  std::vector<double> H(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> x(theta);

  // Central differences on the gradient keep the eval count at 2n.
  std::vector<double> gp, gm;
  for (int i = 0; i < n; ++i) {
    const double h = 1e-5 * (1.0 + std::abs(theta[i]));
    x[i] = theta[i] + h;
    loss.gradient(x, gp);
    x[i] = theta[i] - h;
    loss.gradient(x, gm);
    x[i] = theta[i];
    for (int j = 0; j < n; ++j) {
      const double v = (gp[j] - gm[j]) / (2.0 * h);
      if (!std::isfinite(v)) throw InvalidInputError("non-finite Hessian entry");
      H[static_cast<size_t>(i) * n + j] = v;
    }
  }
  // Symmetrize.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (H[static_cast<size_t>(i) * n + j] + H[static_cast<size_t>(j) * n + i]);
      H[static_cast<size_t>(i) * n + j] = s;
      H[static_cast<size_t>(j) * n + i] = s;
    }
  return H;
}

double min_hessian_eigenvalue(const LossOracle& loss, const std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  const std::vector<double> H = finite_difference_hessian(loss, theta);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = H[static_cast<size_t>(i) * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

HawkingTemperature hawking_temperature(const LossOracle& loss,
                                       const std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  HawkingTemperature out;

  if (n > 64) {
    // Diagonal approximation: log|det| = sum log|H_ii|.
    out.diag_approx = true;
    std::vector<double> x(theta);
    const double base = loss.value(theta);
    double log_abs_det = 0.0;
    int sign = 1;
    for (int i = 0; i < n; ++i) {
      const double h = 1e-4 * (1.0 + std::abs(theta[i]));
      x[i] = theta[i] + h;
      const double up = loss.value(x);
      x[i] = theta[i] - h;
      const double down = loss.value(x);
      x[i] = theta[i];
      const double hii = (up - 2.0 * base + down) / (h * h);
      if (!std::isfinite(hii)) throw InvalidInputError("non-finite Hessian entry");
      if (hii == 0.0) {
        out.det_sign = 0;
        out.value = 0.0;
        return out;
      }
      if (hii < 0.0) sign = -sign;
      log_abs_det += std::log(std::abs(hii));
    }
    out.det_sign = sign;
    out.value = std::exp(0.5 * log_abs_det);
    return out;
  }

  const std::vector<double> H = finite_difference_hessian(loss, theta);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = H[static_cast<size_t>(i) * n + j];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const Eigen::MatrixXd& U = lu.matrixLU();
  double log_abs_det = 0.0;
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (int i = 0; i < n; ++i) {
    const double d = U(i, i);
    if (d == 0.0 || !std::isfinite(d)) {
      out.det_sign = 0;
      out.value = 0.0;
      return out;
    }
    if (d < 0.0) sign = -sign;
    log_abs_det += std::log(std::abs(d));
  }
  out.det_sign = sign;
  out.value = std::exp(0.5 * log_abs_det);
  return out;
}

}  // namespace ricci
