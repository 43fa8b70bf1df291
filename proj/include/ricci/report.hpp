#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ricci/surgery.hpp"

namespace ricci {

// One row of the run time series. Topology columns describe the
// effective 1-skeleton (metric-thresholded); *_raw are the plain graph.
struct StepRow {
  int step = 0;
  double t = 0.0;
  double loss = 0.0;
  double lyapunov = 0.0;
  double eta_star = 0.0;
  double eta_c = 0.0;
  double ric_l2 = 0.0;
  double grad_ric_lp = 0.0;
  double min_g = 0.0;
  double max_g = 0.0;
  double scalar_R = 0.0;
  int edges = 0;
  int edges_eff = 0;
  int b0 = 0;
  int b1 = 0;
  int betti_sum = 0;
  double bound_rhs = 0.0;
  bool bound_ok = false;
  int b0_raw = 0;
  int b1_raw = 0;
  std::string surgery = "none";
  double wall_ms = 0.0;  // zeroed in serial mode
};

struct DiagnosticsBlock {
  bool present = false;
  double s_ent = 0.0;
  double rho_e = 0.0;
  double area = 0.0;
  double ent_bound = 0.0;
  bool ent_satisfied = false;
  double d_g = 0.0;
  double robustness = 0.0;
  bool robustness_unbounded = false;
  double t_coh = 0.0;
  bool t_coh_infinite = false;
  double hawking_t = 0.0;
  int hessian_det_sign = 0;
  bool hessian_diag_approx = false;
};

struct RunReport {
  int schema_version = 1;
  std::vector<std::pair<std::string, std::string>> spec_echo;  // ordered key/value
  std::vector<StepRow> rows;
  std::vector<SurgeryEvent> events;
  DiagnosticsBlock diagnostics;
  bool diverged = false;
  std::string failure;
  int steps_to_eps = -1;       // first step with loss <= eps, -1 if never
  double rts_effective = 0.0;  // simplification rate, effective topology
  double rts_raw = 0.0;
  double fitted_decay_rate = 0.0;  // from ln V regression; 0 if not fittable
  double total_wall_ms = 0.0;      // zeroed in serial mode
  bool serial_mode = true;
};

// Canonical JSON bytes; identical reports give identical strings, and
// parse_report_json followed by report_json round-trips byte-exactly.
std::string report_json(const RunReport& report);
RunReport parse_report_json(const std::string& text);

void write_report_csv(const RunReport& report, std::ostream& out);
void write_report_plotdata(const RunReport& report, std::ostream& out);

// Writes <basename>.json/.csv/.plotdata under out_dir for each
// requested format ("json", "csv", "plotdata").
void emit_report(const RunReport& report, const std::vector<std::string>& formats,
                 const std::string& out_dir, const std::string& basename);

}  // namespace ricci
