#pragma once

#include <vector>

#include "ricci/graph.hpp"
#include "ricci/transport.hpp"

namespace ricci {

// Ollivier-Ricci curvature data for a graph+metric snapshot.
struct CurvatureField {
  std::vector<double> kappa;       // per-edge, 1 - W1/d
  std::vector<double> ric_vertex;  // weight-averaged incident kappa
  std::vector<double> ric_edge;    // kappa_e * g_e
  std::vector<double> grad_ric;    // sqrt(w_e) * (ric_v - ric_u), u < v
};

// Graph ground-cost matrices carry exact ties, where Sinkhorn's
// marginal violation decays slowly; the curvature path therefore runs a
// throughput profile by default (the TransportProblem defaults stay at
// tol 1e-9 / epsilon 0.01 max for standalone solves).
struct CurvatureOptions {
  double alpha = 0.5;            // measure idleness
  bool oracle_transport = false; // exact_w1 whenever supports fit
  bool hop_distance = false;     // unit-length ground distance
  double epsilon_scale = 0.05;   // sinkhorn epsilon = scale * max(cost)
  double sinkhorn_tol = 1e-6;
  int sinkhorn_max_iter = 100000;
};

// Ollivier curvature of one edge: 1 - W1(mu_i, mu_j) / d(i, j).
double edge_curvature(const ParameterGraph& graph, const MetricState& metric, int e,
                      const CurvatureOptions& opts);

// Full field: every edge curvature plus the derived vertex field and
// its edge-difference gradient. Isolated vertices get ric_vertex = 0.
CurvatureField curvature_field(const ParameterGraph& graph, const MetricState& metric,
                               const CurvatureOptions& opts);

// L^p norm of the curvature (order 0, volume-weighted over vertices) or
// of its gradient (order 1, g-weighted over edges). p = infinity gives
// the max absolute value.
double curvature_norm(const CurvatureField& field, const MetricState& metric, double p,
                      int order);

// (grad f)_e = sqrt(w_e) (f_v - f_u) with the fixed orientation u < v.
std::vector<double> graph_gradient(const ParameterGraph& graph, const MetricState& metric,
                                   const std::vector<double>& f);

// Weighted graph Laplacian, (Delta f)_i = sum_j w_ij (f_j - f_i).
std::vector<double> graph_laplacian(const ParameterGraph& graph, const MetricState& metric,
                                    const std::vector<double>& f);

// Which curvature term enters the Bochner decomposition: the plain
// vertex value Ric(i)|grad f|^2(i), or the endpoint-averaged variant
// (1/2) sum_j w_ij (Ric_i + Ric_j)(f_j - f_i)^2.
enum class BochnerCurvatureTerm { plain, averaged };

struct BochnerTerms {
  std::vector<double> gamma2;
  std::vector<double> hessian_sq;
  std::vector<double> curvature_term;
  std::vector<double> residual;  // gamma2 - hessian_sq - curvature_term
};

// Splits (1/2) Delta |grad f|^2 into a Gamma2-type term, a Hessian
// surrogate and a curvature term, and reports how far the discrete
// Bochner identity is from holding. The residual is a diagnostic; it is
// not zero in general.
BochnerTerms bochner_decomposition(const ParameterGraph& graph, const MetricState& metric,
                                   const std::vector<double>& f, const CurvatureField& field,
                                   BochnerCurvatureTerm variant = BochnerCurvatureTerm::plain);

// Default L^p exponent for curvature-derivative norms: max(2, (n+2)/2).
double default_lp_exponent(int n);

}  // namespace ricci
