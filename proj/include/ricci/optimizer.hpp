#pragma once

#include <optional>
#include <vector>

#include "ricci/flow.hpp"
#include "ricci/report.hpp"
#include "ricci/surgery.hpp"
#include "ricci/topology.hpp"

namespace ricci {

// Learning-rate state: the dimensional constant, the running Lipschitz
// estimate of the loss gradient, the initial loss, and the safety cap.
struct LrState {
  double c_n = 12.566370614359172954;  // 4*pi
  double l_lip = 1e-8;
  double l0 = 0.0;
  double eta_max = 1.0;

  // Running max of |dgrad| / |dtheta|, floored at 1e-8.
  void observe(const std::vector<double>& dtheta, const std::vector<double>& dgrad);
};

struct CriticalLr {
  double value = 0.0;
  bool discriminant_clamped = false;  // 4 beta L0 exceeded C_n^2 L^{4/n}
};

// eta_c = 2 / (C_n L^{2/n}) * (1 + sqrt(1 - 4 beta L0 / (C_n^2 L^{4/n}))),
// discriminant clamped at zero, result capped at eta_max.
CriticalLr critical_lr(const LrState& state, double beta, int n);

// eta* = eta_c / (1 + sqrt(grad_ric_norm)).
double optimal_lr(double eta_c, double grad_ric_norm);

// V = sum_i ric_i^2 vol_i + beta * loss.
double lyapunov(const CurvatureField& field, const MetricState& metric, double loss_value,
                double beta);

enum class CouplingMode { diagonal, laplacian };
enum class CurvatureMode { ollivier, hessian_diag };
enum class MetricInit { weights, theta_sq };

struct OptimizerConfig {
  FlowConfig flow;
  SurgeryConfig surgery;
  double c_n = 12.566370614359172954;  // C_2 = 4*pi
  double eta_max = 1.0;
  CouplingMode coupling = CouplingMode::diagonal;
  CurvatureMode curvature_mode = CurvatureMode::ollivier;
  double topo_cutoff_ratio = 100.0;  // effective-topology threshold
  bool serial = true;                // zero wall times for byte-stable reports

  // Baseline switches; the full geometric optimizer keeps all three on.
  bool enable_surgery = true;
  bool enable_flow = true;
  bool curvature_coupling = true;
  bool adaptive_lr = true;
  double fixed_eta = 0.0;  // 0 -> 2/(C_n L^{2/n}) frozen after warmup
};

struct RunBudget {
  int max_steps = 1000;
  double eps = 1e-6;
  bool loss_only = false;  // ignore the V <= eps stop (baseline comparisons)
};

struct OptimizerState {
  std::vector<double> theta;
  int step = 0;
  std::vector<double> lyapunov_history;
  std::vector<double> last_grad;
  std::vector<SurgeryEvent> events;
  LrState lr;
  double frozen_eta = 0.0;  // fixed-rate baselines

  // Caches carried between steps; invalidated by surgery.
  std::optional<CurvatureField> field;
  int field_age = 0;
  bool have_eval = false;
  double cached_loss = 0.0;
  std::vector<double> cached_grad;
};

struct MetaStepOutcome {
  double loss = 0.0;       // at the updated parameters
  double lyapunov = 0.0;   // of the post-step state
  double eta_star = 0.0;
  double eta_c = 0.0;
  double ric_l2 = 0.0;     // post-step field
  double grad_ric_lp = 0.0;
  double scalar_R = 0.0;
  SurgeryKind surgery = SurgeryKind::none;
};

// One meta-optimizer step: loss/gradient, curvature, optional surgery,
// curvature-aware learning rate, coupled parameter update, one flow
// step, Lyapunov bookkeeping. Throws DivergenceError when the update
// stays non-finite after one halved retry.
MetaStepOutcome meta_step(ParameterGraph& graph, MetricState& metric, OptimizerState& state,
                          const LossOracle& loss, const OptimizerConfig& cfg);

// Initializes state for theta0 (Lipschitz warmup probe, initial
// Lyapunov entry). Used by run(); exposed for tests.
void init_optimizer_state(OptimizerState& state, ParameterGraph& graph,
                          const MetricState& metric, const std::vector<double>& theta0,
                          const LossOracle& loss, const OptimizerConfig& cfg);

// Full optimization loop; stops when V <= eps, loss <= eps, or the step
// budget runs out. On divergence the report carries the failure marker
// and the rows recorded so far. final_state, when given, receives the
// optimizer state at exit.
RunReport run(ParameterGraph& graph, MetricState& metric, const std::vector<double>& theta0,
              const LossOracle& loss, const OptimizerConfig& cfg, const RunBudget& budget,
              OptimizerState* final_state = nullptr);

// Metric for Alg-3-style initialization: g_e = mean(theta_u^2, theta_v^2)
// clamped to the floor.
MetricState theta_sq_metric(const ParameterGraph& graph, const std::vector<double>& theta,
                            double g_floor);

}  // namespace ricci
