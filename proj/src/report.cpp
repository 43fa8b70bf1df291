#include "ricci/report.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace ricci {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json row_to_json(const StepRow& r) {
  ordered_json j;
  j["step"] = r.step;
  j["t"] = r.t;
  j["loss"] = r.loss;
  j["V"] = r.lyapunov;
  j["eta_star"] = r.eta_star;
  j["eta_c"] = r.eta_c;
  j["ric_l2"] = r.ric_l2;
  j["grad_ric_lp"] = r.grad_ric_lp;
  j["min_g"] = r.min_g;
  j["max_g"] = r.max_g;
  j["R"] = r.scalar_R;
  j["edges"] = r.edges;
  j["edges_eff"] = r.edges_eff;
  j["b0"] = r.b0;
  j["b1"] = r.b1;
  j["betti_sum"] = r.betti_sum;
  j["bound_rhs"] = r.bound_rhs;
  j["bound_ok"] = r.bound_ok;
  j["b0_raw"] = r.b0_raw;
  j["b1_raw"] = r.b1_raw;
  j["surgery"] = r.surgery;
  j["wall_ms"] = r.wall_ms;
  return j;
}

StepRow row_from_json(const ordered_json& j) {
  StepRow r;
  r.step = j.at("step");
  r.t = j.at("t");
  r.loss = j.at("loss");
  r.lyapunov = j.at("V");
  r.eta_star = j.at("eta_star");
  r.eta_c = j.at("eta_c");
  r.ric_l2 = j.at("ric_l2");
  r.grad_ric_lp = j.at("grad_ric_lp");
  r.min_g = j.at("min_g");
  r.max_g = j.at("max_g");
  r.scalar_R = j.at("R");
  r.edges = j.at("edges");
  r.edges_eff = j.at("edges_eff");
  r.b0 = j.at("b0");
  r.b1 = j.at("b1");
  r.betti_sum = j.at("betti_sum");
  r.bound_rhs = j.at("bound_rhs");
  r.bound_ok = j.at("bound_ok");
  r.b0_raw = j.at("b0_raw");
  r.b1_raw = j.at("b1_raw");
  r.surgery = j.at("surgery");
  r.wall_ms = j.at("wall_ms");
  return r;
}

ordered_json event_to_json(const SurgeryEvent& ev) {
  ordered_json j;
  j["step"] = ev.step;
  j["kind"] = surgery_kind_name(ev.kind);
  j["edge"] = ev.edge;
  j["lambda_or_alpha"] = ev.lambda_or_alpha;
  j["pre_norm"] = ev.pre_norm;
  j["post_norm"] = ev.post_norm;
  j["no_op"] = ev.no_op;
  j["edges_added"] = ev.edges_added;
  return j;
}

SurgeryEvent event_from_json(const ordered_json& j) {
  SurgeryEvent ev;
  ev.step = j.at("step");
  const std::string kind = j.at("kind");
  ev.kind = kind == "neckpinch"  ? SurgeryKind::neckpinch
            : kind == "collapse" ? SurgeryKind::collapse
            : kind == "conical"  ? SurgeryKind::conical
                                 : SurgeryKind::none;
  ev.edge = j.at("edge");
  ev.lambda_or_alpha = j.at("lambda_or_alpha");
  ev.pre_norm = j.at("pre_norm");
  ev.post_norm = j.at("post_norm");
  ev.no_op = j.at("no_op");
  ev.edges_added = j.at("edges_added");
  return ev;
}

}  // namespace

std::string report_json(const RunReport& report) {
  ordered_json j;
  j["schema_version"] = report.schema_version;
  ordered_json spec = ordered_json::object();
  for (const auto& [k, v] : report.spec_echo) spec[k] = v;
  j["spec"] = spec;
  j["serial_mode"] = report.serial_mode;
  j["diverged"] = report.diverged;
  j["failure"] = report.failure;
  j["steps_to_eps"] = report.steps_to_eps;
  j["rts_effective"] = report.rts_effective;
  j["rts_raw"] = report.rts_raw;
  j["fitted_decay_rate"] = report.fitted_decay_rate;
  j["total_wall_ms"] = report.total_wall_ms;

  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  j["series"] = rows;

  ordered_json events = ordered_json::array();
  for (const auto& ev : report.events) events.push_back(event_to_json(ev));
  j["surgery_events"] = events;

  if (report.diagnostics.present) {
    ordered_json d;
    d["s_ent"] = report.diagnostics.s_ent;
    d["rho_E"] = report.diagnostics.rho_e;
    d["area"] = report.diagnostics.area;
    d["ent_bound"] = report.diagnostics.ent_bound;
    d["ent_satisfied"] = report.diagnostics.ent_satisfied;
    d["D_g"] = report.diagnostics.d_g;
    d["robustness_bound"] = report.diagnostics.robustness;
    d["robustness_unbounded"] = report.diagnostics.robustness_unbounded;
    d["t_coh"] = report.diagnostics.t_coh;
    d["t_coh_infinite"] = report.diagnostics.t_coh_infinite;
    d["T_H"] = report.diagnostics.hawking_t;
    d["hessian_det_sign"] = report.diagnostics.hessian_det_sign;
    d["hessian_diag_approx"] = report.diagnostics.hessian_diag_approx;
    j["diagnostics"] = d;
  } else {
    j["diagnostics"] = nullptr;
  }
  return j.dump(2) + "\n";
}

RunReport parse_report_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  RunReport report;
  report.schema_version = j.at("schema_version");
  for (const auto& [k, v] : j.at("spec").items())
    report.spec_echo.emplace_back(k, v.get<std::string>());
  report.serial_mode = j.at("serial_mode");
  report.diverged = j.at("diverged");
  report.failure = j.at("failure");
  report.steps_to_eps = j.at("steps_to_eps");
  report.rts_effective = j.at("rts_effective");
  report.rts_raw = j.at("rts_raw");
  report.fitted_decay_rate = j.at("fitted_decay_rate");
  report.total_wall_ms = j.at("total_wall_ms");
  for (const auto& r : j.at("series")) report.rows.push_back(row_from_json(r));
  for (const auto& ev : j.at("surgery_events")) report.events.push_back(event_from_json(ev));
  const auto& d = j.at("diagnostics");
  if (!d.is_null()) {
    report.diagnostics.present = true;
    report.diagnostics.s_ent = d.at("s_ent");
    report.diagnostics.rho_e = d.at("rho_E");
    report.diagnostics.area = d.at("area");
    report.diagnostics.ent_bound = d.at("ent_bound");
    report.diagnostics.ent_satisfied = d.at("ent_satisfied");
    report.diagnostics.d_g = d.at("D_g");
    report.diagnostics.robustness = d.at("robustness_bound");
    report.diagnostics.robustness_unbounded = d.at("robustness_unbounded");
    report.diagnostics.t_coh = d.at("t_coh");
    report.diagnostics.t_coh_infinite = d.at("t_coh_infinite");
    report.diagnostics.hawking_t = d.at("T_H");
    report.diagnostics.hessian_det_sign = d.at("hessian_det_sign");
    report.diagnostics.hessian_diag_approx = d.at("hessian_diag_approx");
  }
  return report;
}

void write_report_csv(const RunReport& report, std::ostream& out) {
  out << "step,t,loss,V,eta_star,eta_c,ric_l2,grad_ric_lp,min_g,max_g,R,"
         "edges,edges_eff,b0,b1,betti_sum,bound_rhs,bound_ok,b0_raw,b1_raw,surgery,wall_ms\n";
  out.precision(17);
  for (const auto& r : report.rows) {
    out << r.step << ',' << r.t << ',' << r.loss << ',' << r.lyapunov << ',' << r.eta_star << ','
        << r.eta_c << ',' << r.ric_l2 << ',' << r.grad_ric_lp << ',' << r.min_g << ','
        << r.max_g << ',' << r.scalar_R << ',' << r.edges << ',' << r.edges_eff << ',' << r.b0
        << ',' << r.b1 << ',' << r.betti_sum << ',' << r.bound_rhs << ','
        << (r.bound_ok ? 1 : 0) << ',' << r.b0_raw << ',' << r.b1_raw << ',' << r.surgery << ','
        << r.wall_ms << '\n';
  }
}

void write_report_plotdata(const RunReport& report, std::ostream& out) {
  out << "# step t loss V eta_star ric_l2 grad_ric_lp min_g b0 b1\n";
  out.precision(17);
  for (const auto& r : report.rows) {
    out << r.step << ' ' << r.t << ' ' << r.loss << ' ' << r.lyapunov << ' ' << r.eta_star << ' '
        << r.ric_l2 << ' ' << r.grad_ric_lp << ' ' << r.min_g << ' ' << r.b0 << ' ' << r.b1
        << '\n';
  }
}

void emit_report(const RunReport& report, const std::vector<std::string>& formats,
                 const std::string& out_dir, const std::string& basename) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  auto open = [&](const std::string& ext) {
    const fs::path path = fs::path(out_dir) / (basename + ext);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    return f;
  };
  for (const auto& fmt : formats) {
    if (fmt == "json") {
      auto f = open(".json");
      f << report_json(report);
    } else if (fmt == "csv") {
      auto f = open(".csv");
      write_report_csv(report, f);
    } else if (fmt == "plotdata") {
      auto f = open(".plotdata");
      write_report_plotdata(report, f);
    } else {
      throw InvalidInputError("unknown report format: " + fmt);
    }
  }
}

}  // namespace ricci
