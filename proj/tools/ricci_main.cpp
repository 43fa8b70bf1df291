// Command-line front end: curvature dumps, flow evolution, the full
// geometric meta-optimizer, baseline comparisons, the scaling study and
// report format conversion.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricci/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDivergence = 2;
constexpr int kExitInvalid = 3;

struct CommonOpts {
  std::string graph_path;
  std::string config_path;
  std::string benchmark;
  std::string out_dir = ".";
  std::string format = "json";
  uint64_t seed = 0;
  bool seed_set = false;
  int steps = -1;
  double eps = -1.0;
  double beta = -2.0;
  double kappa = -1.0;
  bool oracle_transport = false;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--graph", opts.graph_path, "graph input file");
  cmd->add_option("--config", opts.config_path, "key-value config file");
  cmd->add_option("--benchmark", opts.benchmark, "benchmark preset (Q1, T1)");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--format", opts.format, "json|csv|plotdata (comma separated)");
  cmd->add_option("--seed", opts.seed, "RNG seed")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_option("--steps", opts.steps, "step budget");
  cmd->add_option("--eps", opts.eps, "convergence threshold");
  cmd->add_option("--beta", opts.beta, "flow coupling beta");
  cmd->add_option("--kappa", opts.kappa, "surgery threshold kappa");
  cmd->add_flag("--oracle-transport", opts.oracle_transport, "exact W1 solver");
  cmd->add_flag("--serial", opts.serial, "bit-exact serial mode (zeroes timings)");
}

ricci::BenchmarkSpec build_spec(const CommonOpts& opts, ricci::BenchmarkSpec spec = {}) {
  if (!opts.benchmark.empty()) spec = ricci::benchmark_preset(opts.benchmark);
  if (!opts.config_path.empty())
    ricci::apply_config(spec, ricci::parse_config_file(opts.config_path));
  if (!opts.graph_path.empty()) {
    spec.graph_kind = ricci::GraphKind::file;
    spec.graph_path = opts.graph_path;
  }
  if (opts.seed_set) spec.seed = opts.seed;
  if (opts.steps >= 0) spec.max_steps = opts.steps;
  if (opts.eps > 0.0) spec.eps = opts.eps;
  if (opts.beta > -1.5) spec.beta = opts.beta;
  if (opts.kappa > 0.0) spec.opt.surgery.kappa_thresh = opts.kappa;
  if (opts.oracle_transport) spec.opt.flow.transport.oracle_transport = true;
  if (opts.serial) spec.opt.serial = true;
  return spec;
}

std::vector<std::string> split_formats(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ricci::IoError("cannot write " + path.string());
  return f;
}

int cmd_curvature(const CommonOpts& opts) {
  ricci::BenchmarkSpec spec = build_spec(opts);
  ricci::BenchmarkInstance inst = ricci::build_benchmark(spec);
  ricci::CurvatureOptions copts = spec.opt.flow.curvature_options();
  const ricci::CurvatureField field = ricci::curvature_field(inst.graph, inst.metric, copts);

  auto f = open_out(opts.out_dir, "curvature.csv");
  f << "edge_i,edge_j,g,w,kappa,grad_ric\n";
  f.precision(17);
  for (int e = 0; e < inst.graph.edge_count(); ++e) {
    const ricci::Edge& ed = inst.graph.edge(e);
    f << ed.u << ',' << ed.v << ',' << inst.metric.g[e] << ',' << inst.metric.w[e] << ','
      << field.kappa[e] << ',' << field.grad_ric[e] << '\n';
  }
  std::cout << "wrote curvature.csv (" << inst.graph.edge_count() << " edges)\n";
  return kExitOk;
}

int cmd_flow(const CommonOpts& opts) {
  ricci::BenchmarkSpec spec = build_spec(opts);
  ricci::BenchmarkInstance inst = ricci::build_benchmark(spec);
  ricci::FlowConfig cfg = spec.opt.flow;
  cfg.beta = spec.beta >= 0.0 ? spec.beta : 0.1 * std::sqrt(spec.intrinsic_dim);
  cfg.steps = spec.max_steps;

  const ricci::FlowResult result = ricci::evolve(inst.graph, inst.metric, cfg, *inst.loss);
  auto f = open_out(opts.out_dir, "flow_trace.csv");
  ricci::write_flow_trace_csv(result.trace, f);
  auto g = open_out(opts.out_dir, "flow_final.graph");
  ricci::save_graph(inst.graph, &result.metric, g);
  std::cout << "evolved " << result.trace.size() << " steps; min_g="
            << result.metric.min_g() << " max_g=" << result.metric.max_g() << "\n";
  return kExitOk;
}

int cmd_optimize(const CommonOpts& opts) {
  ricci::BenchmarkSpec spec = build_spec(opts);
  const ricci::RunReport report = ricci::run_benchmark(spec);
  ricci::emit_report(report, split_formats(opts.format), opts.out_dir, "run_" + spec.name);
  if (!report.events.empty()) {
    auto f = open_out(opts.out_dir, "run_" + spec.name + ".surgery.jsonl");
    ricci::write_surgery_log(report.events, f);
  }
  const auto& last = report.rows.back();
  std::cout << "steps=" << last.step << " loss=" << last.loss << " V=" << last.lyapunov
            << " b1=" << last.b1 << (report.diverged ? " DIVERGED" : "") << "\n";
  return report.diverged ? kExitDivergence : kExitOk;
}

int cmd_compare(const CommonOpts& opts, const std::vector<std::string>& baselines) {
  ricci::BenchmarkSpec spec = build_spec(opts);
  std::vector<std::string> names =
      baselines.empty() ? std::vector<std::string>{"plain-gd", "decoupled-flow",
                                                   "fixed-lr-geometric"}
                        : baselines;
  const ricci::CompareTable table = ricci::compare_baselines(spec, names);
  auto f = open_out(opts.out_dir, "compare_" + spec.name + ".csv");
  ricci::write_compare_csv(table, f);
  ricci::write_compare_csv(table, std::cout);
  for (const auto& row : table.rows)
    if (row.diverged) return kExitDivergence;
  return kExitOk;
}

int cmd_scale(const CommonOpts& opts, const std::string& sizes_arg, int timed_steps) {
  // Tame default template: timing wants the perturbative regime.
  ricci::BenchmarkSpec base;
  base.theta_scale = 0.05;
  ricci::BenchmarkSpec spec = build_spec(opts, base);
  std::vector<int> sizes;
  std::stringstream ss(sizes_arg);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
  const ricci::ScalingResult result = ricci::scaling_study(sizes, spec, timed_steps);
  auto f = open_out(opts.out_dir, "scaling.csv");
  ricci::write_scaling_csv(result, f);
  auto p = open_out(opts.out_dir, "scaling.plotdata");
  ricci::write_scaling_plotdata(result, p);
  if (result.slope_defined)
    std::cout << "fitted log-log slope: " << result.slope << "\n";
  else
    std::cout << "slope undefined (need >= 2 sizes)\n";
  return kExitOk;
}

int cmd_report(const std::string& in_path, const CommonOpts& opts) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw ricci::IoError("cannot open report: " + in_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const ricci::RunReport report = ricci::parse_report_json(buffer.str());
  const std::string base = std::filesystem::path(in_path).stem().string();
  ricci::emit_report(report, split_formats(opts.format), opts.out_dir, base);
  std::cout << "converted " << in_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-coupled discrete Ricci flow optimizer"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> baselines;
  std::string sizes = "1000,10000,100000";
  std::string report_in;
  int timed_steps = 3;

  auto* curvature = app.add_subcommand("curvature", "Ollivier curvature dump");
  add_common(curvature, opts);

  auto* flow = app.add_subcommand("flow", "evolve the coupled Ricci flow");
  add_common(flow, opts);

  auto* optimize = app.add_subcommand("optimize", "run the geometric meta-optimizer");
  add_common(optimize, opts);

  auto* compare = app.add_subcommand("compare", "baseline comparison table");
  add_common(compare, opts);
  compare->add_option("--baselines", baselines, "subset of plain-gd,decoupled-flow,fixed-lr-geometric");

  auto* scale = app.add_subcommand("scale", "per-step time scaling study");
  add_common(scale, opts);
  scale->add_option("--sizes", sizes, "comma-separated vertex counts");
  scale->add_option("--timed-steps", timed_steps, "timed steps per size");

  auto* report = app.add_subcommand("report", "convert a JSON report");
  report->add_option("--in", report_in, "input report.json")->required();
  report->add_option("--out", opts.out_dir, "output directory");
  report->add_option("--format", opts.format, "json|csv|plotdata (comma separated)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (curvature->parsed()) return cmd_curvature(opts);
    if (flow->parsed()) return cmd_flow(opts);
    if (optimize->parsed()) return cmd_optimize(opts);
    if (compare->parsed()) return cmd_compare(opts, baselines);
    if (scale->parsed()) return cmd_scale(opts, sizes, timed_steps);
    if (report->parsed()) return cmd_report(report_in, opts);
  } catch (const ricci::BlowupError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitDivergence;
  } catch (const ricci::DivergenceError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitDivergence;
  } catch (const ricci::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
