#include "ricci/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ricci/rng.hpp"

namespace ricci {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

const char* graph_kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::file: return "file";
    case GraphKind::cycle: return "cycle";
    case GraphKind::grid: return "grid";
    case GraphKind::random_regular: return "random-regular";
    case GraphKind::noisy_ring: return "noisy-ring";
  }
  return "?";
}

const char* loss_kind_name(LossKind k) {
  switch (k) {
    case LossKind::quadratic: return "quadratic";
    case LossKind::rosenbrock_sum: return "rosenbrock-sum";
    case LossKind::synthetic_embedding: return "synthetic-embedding";
  }
  return "?";
}

double resolved_beta(const BenchmarkSpec& spec) {
  return spec.beta >= 0.0 ? spec.beta : 0.1 * std::sqrt(spec.intrinsic_dim);
}

double resolved_beta_w(const BenchmarkSpec& spec) {
  return spec.beta_w > 0.0 ? spec.beta_w : 0.1 * std::sqrt(spec.intrinsic_dim);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> BenchmarkSpec::echo() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("name", name);
  kv.emplace_back("graph", graph_kind_name(graph_kind));
  if (graph_kind == GraphKind::file) kv.emplace_back("graph_path", graph_path);
  kv.emplace_back("size", std::to_string(size));
  if (graph_kind == GraphKind::grid) {
    kv.emplace_back("grid_rows", std::to_string(grid_rows));
    kv.emplace_back("grid_cols", std::to_string(grid_cols));
  }
  if (graph_kind == GraphKind::random_regular)
    kv.emplace_back("degree", std::to_string(degree));
  if (graph_kind == GraphKind::noisy_ring) kv.emplace_back("chords", std::to_string(chords));
  kv.emplace_back("loss", loss_kind_name(loss_kind));
  if (loss_kind == LossKind::quadratic)
    kv.emplace_back("condition", fmt(condition_number));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("eps", fmt(eps));
  kv.emplace_back("max_steps", std::to_string(max_steps));
  kv.emplace_back("beta", fmt(resolved_beta(*this)));
  kv.emplace_back("beta_w", fmt(resolved_beta_w(*this)));
  kv.emplace_back("dt", fmt(opt.flow.dt));
  kv.emplace_back("integrator", opt.flow.integrator == Integrator::rk4 ? "rk4" : "euler");
  kv.emplace_back("alpha", fmt(opt.flow.alpha));
  kv.emplace_back("g_floor", fmt(opt.flow.g_floor));
  kv.emplace_back("kappa", fmt(opt.surgery.kappa_thresh));
  kv.emplace_back("c_n", fmt(opt.c_n));
  kv.emplace_back("eta_max", fmt(opt.eta_max));
  kv.emplace_back("oracle_transport", opt.flow.transport.oracle_transport ? "1" : "0");
  kv.emplace_back("topo_cutoff", fmt(opt.topo_cutoff_ratio));
  kv.emplace_back("serial", opt.serial ? "1" : "0");
  return kv;
}

BenchmarkSpec benchmark_preset(const std::string& name) {
  BenchmarkSpec spec;
  spec.name = name;
  if (name == "Q1") {
    spec.graph_kind = GraphKind::cycle;
    spec.size = 32;
    spec.loss_kind = LossKind::quadratic;
    spec.condition_number = 100.0;
    spec.seed = 1;
    spec.theta_scale = 0.05;
    spec.eps = 1e-5;
    spec.max_steps = 10000;
    spec.opt.flow.dt = 1e-3;
    spec.opt.flow.integrator = Integrator::rk4;
    // Three-point supports: the exact solver is both faster and tighter.
    spec.opt.flow.transport.oracle_transport = true;
    return spec;
  }
  if (name == "T1") {
    spec.graph_kind = GraphKind::noisy_ring;
    spec.size = 32;
    spec.chords = 8;
    spec.seed = 7;
    spec.loss_kind = LossKind::quadratic;
    spec.condition_number = 10.0;
    spec.theta_scale = 0.1;
    spec.eps = 1e-13;
    spec.max_steps = 2000;
    spec.opt.flow.dt = 0.02;
    spec.opt.flow.integrator = Integrator::rk4;
    spec.opt.flow.transport.oracle_transport = true;
    // Negatively curved chords blow up past this ratio and leave the
    // effective 1-skeleton; collapse events punctuate the contraction.
    spec.opt.topo_cutoff_ratio = 6.0;
    spec.opt.surgery.kappa_thresh = 2.5;
    return spec;
  }
  throw InvalidInputError("unknown benchmark preset: " + name);
}

ParameterGraph make_cycle(int n, int coord_dim, int intrinsic_dim) {
  if (n < 3) throw InvalidInputError("cycle needs >= 3 vertices");
  ParameterGraph graph(n, coord_dim, intrinsic_dim);
  for (int v = 0; v < n; ++v) {
    const double a = kTau * v / n;
    graph.set_coord(v, 0, std::cos(a));
    if (coord_dim > 1) graph.set_coord(v, 1, std::sin(a));
  }
  for (int v = 0; v < n; ++v) graph.add_edge(v, (v + 1) % n);
  return graph;
}

ParameterGraph make_grid(int rows, int cols, int intrinsic_dim) {
  if (rows < 1 || cols < 1) throw InvalidInputError("grid needs positive dimensions");
  ParameterGraph graph(rows * cols, 2, intrinsic_dim);
  auto id = [&](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      graph.set_coord(id(r, c), 0, c);
      graph.set_coord(id(r, c), 1, r);
      if (c + 1 < cols) graph.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) graph.add_edge(id(r, c), id(r + 1, c));
    }
  }
  return graph;
}

ParameterGraph make_random_regular(int n, int degree, uint64_t seed, int intrinsic_dim) {
  if (n < degree + 1) throw InvalidInputError("random-regular needs n > degree");
  if ((static_cast<long long>(n) * degree) % 2 != 0)
    throw InvalidInputError("n * degree must be even");

  Rng rng(seed);
  const int stubs = n * degree;
  std::vector<int> perm(stubs);

  // Pairing model with local repair: shuffle stubs, pair consecutively,
  // then swap partners out of self-loops/duplicates.
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (int i = 0; i < stubs; ++i) perm[i] = i / degree;
    for (int i = stubs - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.index(static_cast<uint64_t>(i) + 1)]);

    const int pairs = stubs / 2;
    auto endpoint = [&](int p, int side) -> int& { return perm[2 * p + side]; };
    auto canon = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    std::vector<std::pair<int, int>> eset;
    auto rebuild = [&]() {
      eset.clear();
      for (int p = 0; p < pairs; ++p) eset.push_back(canon(endpoint(p, 0), endpoint(p, 1)));
      std::sort(eset.begin(), eset.end());
    };
    auto count_of = [&](std::pair<int, int> e) {
      auto lo = std::lower_bound(eset.begin(), eset.end(), e);
      auto hi = std::upper_bound(eset.begin(), eset.end(), e);
      return static_cast<int>(hi - lo);
    };
    auto bad = [&](int p) {
      const auto e = canon(endpoint(p, 0), endpoint(p, 1));
      return e.first == e.second || count_of(e) > 1;
    };

    rebuild();
    bool clean = false;
    for (int iter = 0; iter < 50 * pairs && !clean; ++iter) {
      clean = true;
      for (int p = 0; p < pairs; ++p) {
        if (!bad(p)) continue;
        clean = false;
        const int q = static_cast<int>(rng.index(pairs));
        if (q == p) continue;
        std::swap(endpoint(p, 1), endpoint(q, 1));
        rebuild();
      }
    }
    if (!clean) continue;

    ParameterGraph graph(n, 2, intrinsic_dim);
    for (int v = 0; v < n; ++v) {
      graph.set_coord(v, 0, rng.uniform());
      graph.set_coord(v, 1, rng.uniform());
    }
    for (int p = 0; p < pairs; ++p) graph.add_edge(endpoint(p, 0), endpoint(p, 1));
    return graph;
  }
  throw Error("random-regular generation did not stabilize");
}

ParameterGraph make_noisy_ring(int n, int chords, uint64_t seed, int intrinsic_dim) {
  if (n < 5) throw InvalidInputError("noisy ring needs >= 5 vertices");
  Rng rng(seed);
  ParameterGraph graph(n, 2, intrinsic_dim);
  for (int v = 0; v < n; ++v) {
    const double a = kTau * v / n;
    graph.set_coord(v, 0, std::cos(a) + 0.02 * rng.normal());
    graph.set_coord(v, 1, std::sin(a) + 0.02 * rng.normal());
  }
  for (int v = 0; v < n; ++v) graph.add_edge(v, (v + 1) % n);

  int added = 0;
  int guard = 0;
  while (added < chords && guard++ < 100000) {
    const int a = static_cast<int>(rng.index(n));
    const int b = static_cast<int>(rng.index(n));
    const int gap = std::min((a - b + n) % n, (b - a + n) % n);
    if (gap < 2) continue;  // self-loop or ring edge
    if (graph.has_edge(a, b)) continue;
    graph.add_edge(a, b);
    ++added;
  }
  if (added < chords) throw Error("could not place the requested chords");
  return graph;
}

BenchmarkInstance build_benchmark(const BenchmarkSpec& spec) {
  BenchmarkInstance inst{ParameterGraph(1, 1, 1), MetricState{}, {}, nullptr};
  Rng rng(spec.seed);

  bool theta_from_file = false;
  switch (spec.graph_kind) {
    case GraphKind::file: {
      LoadedGraph loaded = load_graph_file(spec.graph_path);
      inst.graph = std::move(loaded.graph);
      if (loaded.has_metric) {
        inst.metric.g = std::move(loaded.g);
        inst.metric.g_floor = spec.opt.flow.g_floor;
        inst.metric.refresh(inst.graph);
      }
      theta_from_file = true;
      break;
    }
    case GraphKind::cycle:
      inst.graph = make_cycle(spec.size, spec.coord_dim, spec.intrinsic_dim);
      break;
    case GraphKind::grid: {
      int rows = spec.grid_rows, cols = spec.grid_cols;
      if (rows <= 0 || cols <= 0) {
        rows = std::max(1, static_cast<int>(std::lround(std::sqrt(spec.size))));
        cols = (spec.size + rows - 1) / rows;
      }
      inst.graph = make_grid(rows, cols, spec.intrinsic_dim);
      break;
    }
    case GraphKind::random_regular:
      inst.graph = make_random_regular(spec.size, spec.degree, spec.seed, spec.intrinsic_dim);
      break;
    case GraphKind::noisy_ring:
      inst.graph = make_noisy_ring(spec.size, spec.chords, spec.seed, spec.intrinsic_dim);
      break;
  }

  const int nv = inst.graph.vertex_count();
  if (theta_from_file) {
    inst.theta0 = inst.graph.theta;
  } else {
    inst.theta0.resize(nv);
    for (int v = 0; v < nv; ++v) inst.theta0[v] = spec.theta_scale * rng.normal();
    inst.graph.theta = inst.theta0;
  }

  if (inst.metric.g.empty()) {
    if (spec.metric_init == MetricInit::theta_sq)
      inst.metric = theta_sq_metric(inst.graph, inst.theta0, spec.opt.flow.g_floor);
    else
      inst.metric = init_weights(inst.graph, resolved_beta_w(spec), spec.opt.flow.g_floor);
  }

  switch (spec.loss_kind) {
    case LossKind::quadratic:
      inst.loss = std::make_unique<QuadraticLoss>(nv, spec.condition_number);
      break;
    case LossKind::rosenbrock_sum:
      inst.loss = std::make_unique<RosenbrockSumLoss>(spec.rosenbrock_a);
      break;
    case LossKind::synthetic_embedding: {
      std::vector<double> targets(nv);
      for (int v = 0; v < nv; ++v) targets[v] = rng.normal();
      inst.loss = std::make_unique<SyntheticEmbeddingLoss>(std::move(targets));
      break;
    }
  }
  return inst;
}

namespace {

OptimizerConfig resolved_config(const BenchmarkSpec& spec) {
  OptimizerConfig cfg = spec.opt;
  cfg.flow.beta = resolved_beta(spec);
  return cfg;
}

void fill_diagnostics(RunReport& report, const BenchmarkSpec& spec, ParameterGraph& graph,
                      const MetricState& metric, const MetricState& metric0,
                      const LossOracle& loss, const OptimizerState& state,
                      const OptimizerConfig& cfg) {
  DiagnosticsBlock& d = report.diagnostics;
  d.present = true;

  HoloConfig holo;
  holo.p_drop = spec.p_drop;
  holo.g_newton = spec.g_newton;
  holo.hbar = spec.hbar;
  holo.eps_quantum = spec.eps_quantum;
  const int nv = graph.vertex_count();
  const int region_size =
      std::clamp(static_cast<int>(std::lround(spec.region_frac * nv)), 1, nv - 1);
  holo.region.resize(region_size);
  std::iota(holo.region.begin(), holo.region.end(), 0);

  const EntanglementBound ent = entanglement_bound(graph, metric, holo);
  d.s_ent = ent.s_ent;
  d.area = ent.area;
  d.ent_bound = ent.bound;
  d.ent_satisfied = ent.satisfied;
  d.rho_e = ent.rho_e;

  // Distortion against the initial metric over the original edge set
  // (surgery appends edges, so the shared prefix is the overlap).
  MetricState cur_prefix, ref_prefix;
  const size_t shared = std::min(metric.g.size(), metric0.g.size());
  cur_prefix.g.assign(metric.g.begin(), metric.g.begin() + shared);
  ref_prefix.g.assign(metric0.g.begin(), metric0.g.begin() + shared);
  if (shared == metric.g.size() && shared == metric0.g.size()) {
    d.d_g = geometric_distortion(graph, metric, metric0);
  } else {
    // Evaluate on a copy of the graph truncated to the shared edges.
    ParameterGraph trimmed(graph.vertex_count(), graph.coord_dim(), graph.intrinsic_dim());
    for (size_t e = 0; e < shared; ++e)
      trimmed.add_edge(graph.edge(static_cast<int>(e)).u, graph.edge(static_cast<int>(e)).v);
    d.d_g = geometric_distortion(trimmed, cur_prefix, ref_prefix);
  }

  const CurvatureField* field = state.field ? &*state.field : nullptr;
  CurvatureField local;
  if (!field) {
    local = curvature_field(graph, metric, cfg.flow.curvature_options());
    field = &local;
  }
  const DecoherenceTime coh = decoherence_time(*field, metric, holo);
  d.t_coh = coh.infinite ? 0.0 : coh.value;
  d.t_coh_infinite = coh.infinite;

  // Hessian-based diagnostics stay on desk-scale problems.
  if (nv <= 64) {
    const double lmin = min_hessian_eigenvalue(loss, state.theta);
    const RobustnessBound rb = robustness_bound(state.lr.l_lip, spec.rho, lmin);
    d.robustness = rb.unbounded ? 0.0 : rb.value;
    d.robustness_unbounded = rb.unbounded;
    const HawkingTemperature hw = hawking_temperature(loss, state.theta);
    d.hawking_t = hw.value;
    d.hessian_det_sign = hw.det_sign;
    d.hessian_diag_approx = hw.diag_approx;
  } else {
    d.robustness_unbounded = true;
    d.hessian_diag_approx = true;
  }
}

}  // namespace

RunReport run_benchmark(const BenchmarkSpec& spec) {
  BenchmarkInstance inst = build_benchmark(spec);
  const MetricState metric0 = inst.metric;
  OptimizerConfig cfg = resolved_config(spec);

  OptimizerState final_state;
  RunReport report = run(inst.graph, inst.metric, inst.theta0, *inst.loss, cfg,
                         RunBudget{spec.max_steps, spec.eps}, &final_state);
  report.spec_echo = spec.echo();
  if (!report.diverged) {
    fill_diagnostics(report, spec, inst.graph, inst.metric, metric0, *inst.loss, final_state,
                     cfg);
  }
  return report;
}

CompareTable compare_baselines(const BenchmarkSpec& spec,
                               const std::vector<std::string>& baselines) {
  using clock = std::chrono::steady_clock;

  auto run_variant = [&](const std::string& name, OptimizerConfig cfg) {
    BenchmarkInstance inst = build_benchmark(spec);
    const auto t0 = clock::now();
    OptimizerState state;
    RunReport rep = run(inst.graph, inst.metric, inst.theta0, *inst.loss, cfg,
                        RunBudget{spec.max_steps, spec.eps, /*loss_only=*/true}, &state);
    BaselineRow row;
    row.name = name;
    row.steps_to_eps = rep.steps_to_eps;
    row.final_loss = rep.rows.empty() ? 0.0 : rep.rows.back().loss;
    row.final_lyapunov = rep.rows.empty() ? 0.0 : rep.rows.back().lyapunov;
    row.diverged = rep.diverged;
    row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    return row;
  };

  CompareTable table;
  table.rows.push_back(run_variant("geometric", resolved_config(spec)));

  for (const std::string& name : baselines) {
    OptimizerConfig cfg = resolved_config(spec);
    if (name == "plain-gd") {
      cfg.curvature_coupling = false;
      cfg.enable_flow = false;
      cfg.enable_surgery = false;
      cfg.adaptive_lr = false;
    } else if (name == "decoupled-flow") {
      cfg.flow.beta = 0.0;
    } else if (name == "fixed-lr-geometric") {
      cfg.adaptive_lr = false;
    } else {
      throw InvalidInputError("unknown baseline: " + name);
    }
    table.rows.push_back(run_variant(name, cfg));
  }

  // Speedups in steps-to-eps against plain-gd, when present and converged.
  const BaselineRow* plain = nullptr;
  for (const auto& row : table.rows)
    if (row.name == "plain-gd") plain = &row;
  if (plain && plain->steps_to_eps > 0) {
    for (auto& row : table.rows) {
      if (row.steps_to_eps > 0)
        row.speedup_vs_plain =
            static_cast<double>(plain->steps_to_eps) / static_cast<double>(row.steps_to_eps);
    }
  }
  return table;
}

void write_compare_csv(const CompareTable& table, std::ostream& out) {
  out << "method,steps_to_eps,final_loss,final_V,wall_ms,diverged,speedup_vs_plain\n";
  out.precision(17);
  for (const auto& row : table.rows) {
    out << row.name << ',' << row.steps_to_eps << ',' << row.final_loss << ','
        << row.final_lyapunov << ',' << row.wall_ms << ',' << (row.diverged ? 1 : 0) << ','
        << row.speedup_vs_plain << '\n';
  }
}

ScalingResult scaling_study(const std::vector<int>& sizes, const BenchmarkSpec& tmpl,
                            int timed_steps) {
  if (timed_steps < 1) throw InvalidInputError("timed_steps must be >= 1");
  for (size_t k = 1; k < sizes.size(); ++k)
    if (sizes[k] <= sizes[k - 1]) throw InvalidInputError("sizes must be increasing");

  using clock = std::chrono::steady_clock;
  ScalingResult result;

  for (int size : sizes) {
    BenchmarkSpec spec = tmpl;
    spec.graph_kind = GraphKind::random_regular;
    spec.size = size;
    spec.loss_kind = LossKind::quadratic;

    OptimizerConfig cfg = resolved_config(spec);
    cfg.flow.integrator = Integrator::euler;
    cfg.flow.curvature_reuse = 1;
    cfg.flow.transport.oracle_transport = false;  // Sinkhorn path
    cfg.enable_surgery = false;                   // timing isolation

    BenchmarkInstance inst = build_benchmark(spec);
    OptimizerState state;
    init_optimizer_state(state, inst.graph, inst.metric, inst.theta0, *inst.loss, cfg);

    // One warmup step, then timed steps.
    meta_step(inst.graph, inst.metric, state, *inst.loss, cfg);
    std::vector<double> seconds;
    for (int k = 0; k < timed_steps; ++k) {
      const auto t0 = clock::now();
      meta_step(inst.graph, inst.metric, state, *inst.loss, cfg);
      seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    std::sort(seconds.begin(), seconds.end());
    ScalingEntry entry;
    entry.size = size;
    const size_t m = seconds.size();
    entry.median_s = m % 2 == 1 ? seconds[m / 2] : 0.5 * (seconds[m / 2 - 1] + seconds[m / 2]);
    entry.iqr_s = seconds[(3 * m) / 4 == m ? m - 1 : (3 * m) / 4] - seconds[m / 4];
    double mean = 0.0;
    for (double s : seconds) mean += s;
    mean /= m;
    double var = 0.0;
    for (double s : seconds) var += (s - mean) * (s - mean);
    var /= m;
    entry.cov = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
    entry.rerun = entry.cov > 0.5;
    result.entries.push_back(entry);
  }

  if (result.entries.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = static_cast<int>(result.entries.size());
    for (const auto& e : result.entries) {
      const double x = std::log(static_cast<double>(e.size));
      const double y = std::log(std::max(e.median_s, 1e-12));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    result.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    result.slope_defined = true;
  }
  return result;
}

void write_scaling_plotdata(const ScalingResult& result, std::ostream& out) {
  out << "# series: measured (vertices seconds_per_step)\n";
  out.precision(17);
  for (const auto& e : result.entries) out << e.size << ' ' << e.median_s << '\n';
  out << "\n# series: reference-overlay (parameters seconds_per_epoch)\n";
  out << "1000 8\n10000 28\n100000 110\n1000000 400\n";
}

void write_scaling_csv(const ScalingResult& result, std::ostream& out) {
  out << "size,median_s,iqr_s,cov,rerun\n";
  out.precision(17);
  for (const auto& e : result.entries)
    out << e.size << ',' << e.median_s << ',' << e.iqr_s << ',' << e.cov << ','
        << (e.rerun ? 1 : 0) << '\n';
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream ss(line);
    std::string key, value;
    if (!(ss >> key)) continue;
    if (!(ss >> value))
      throw InvalidInputError("config line " + std::to_string(lineno) + " has no value");
    kv[key] = value;
  }
  return kv;
}

void apply_config(BenchmarkSpec& spec, const std::map<std::string, std::string>& kv) {
  auto as_double = [](const std::string& s) { return std::stod(s); };
  auto as_int = [](const std::string& s) { return std::stoi(s); };
  auto as_bool = [](const std::string& s) { return s == "1" || s == "true" || s == "yes"; };

  for (const auto& [key, value] : kv) {
    if (key == "name") spec.name = value;
    else if (key == "graph") {
      if (value == "cycle") spec.graph_kind = GraphKind::cycle;
      else if (value == "grid") spec.graph_kind = GraphKind::grid;
      else if (value == "random-regular") spec.graph_kind = GraphKind::random_regular;
      else if (value == "noisy-ring") spec.graph_kind = GraphKind::noisy_ring;
      else {
        spec.graph_kind = GraphKind::file;
        spec.graph_path = value;
      }
    }
    else if (key == "size") spec.size = as_int(value);
    else if (key == "grid_rows") spec.grid_rows = as_int(value);
    else if (key == "grid_cols") spec.grid_cols = as_int(value);
    else if (key == "degree") spec.degree = as_int(value);
    else if (key == "chords") spec.chords = as_int(value);
    else if (key == "dim") spec.coord_dim = as_int(value);
    else if (key == "n") spec.intrinsic_dim = as_int(value);
    else if (key == "loss") {
      if (value == "quadratic") spec.loss_kind = LossKind::quadratic;
      else if (value == "rosenbrock-sum") spec.loss_kind = LossKind::rosenbrock_sum;
      else if (value == "synthetic-embedding") spec.loss_kind = LossKind::synthetic_embedding;
      else throw InvalidInputError("unknown loss: " + value);
    }
    else if (key == "condition") spec.condition_number = as_double(value);
    else if (key == "rosenbrock_a") spec.rosenbrock_a = as_double(value);
    else if (key == "seed") spec.seed = std::stoull(value);
    else if (key == "eps") spec.eps = as_double(value);
    else if (key == "steps" || key == "max_steps") spec.max_steps = as_int(value);
    else if (key == "theta_scale") spec.theta_scale = as_double(value);
    else if (key == "beta") spec.beta = as_double(value);
    else if (key == "beta_w") spec.beta_w = as_double(value);
    else if (key == "dt") spec.opt.flow.dt = as_double(value);
    else if (key == "integrator")
      spec.opt.flow.integrator = value == "rk4" ? Integrator::rk4 : Integrator::euler;
    else if (key == "g_floor") spec.opt.flow.g_floor = as_double(value);
    else if (key == "alpha") spec.opt.flow.alpha = as_double(value);
    else if (key == "reuse") spec.opt.flow.curvature_reuse = as_int(value);
    else if (key == "kappa") spec.opt.surgery.kappa_thresh = as_double(value);
    else if (key == "bn_gamma") spec.opt.surgery.bn_gamma = as_double(value);
    else if (key == "bn_shift") spec.opt.surgery.bn_shift = as_double(value);
    else if (key == "bn_eps") spec.opt.surgery.bn_eps = as_double(value);
    else if (key == "c_n") spec.opt.c_n = as_double(value);
    else if (key == "eta_max") spec.opt.eta_max = as_double(value);
    else if (key == "coupling")
      spec.opt.coupling = value == "laplacian" ? CouplingMode::laplacian : CouplingMode::diagonal;
    else if (key == "curvature")
      spec.opt.curvature_mode =
          value == "hessian-diag" ? CurvatureMode::hessian_diag : CurvatureMode::ollivier;
    else if (key == "oracle_transport") spec.opt.flow.transport.oracle_transport = as_bool(value);
    else if (key == "hop_distance") spec.opt.flow.transport.hop_distance = as_bool(value);
    else if (key == "eps_scale") spec.opt.flow.transport.epsilon_scale = as_double(value);
    else if (key == "sinkhorn_tol") spec.opt.flow.transport.sinkhorn_tol = as_double(value);
    else if (key == "sinkhorn_max_iter")
      spec.opt.flow.transport.sinkhorn_max_iter = as_int(value);
    else if (key == "metric_init")
      spec.metric_init = value == "theta-sq" ? MetricInit::theta_sq : MetricInit::weights;
    else if (key == "topo_cutoff") spec.opt.topo_cutoff_ratio = as_double(value);
    else if (key == "surgery") spec.opt.enable_surgery = as_bool(value);
    else if (key == "flow") spec.opt.enable_flow = as_bool(value);
    else if (key == "p_drop") spec.p_drop = as_double(value);
    else if (key == "region_frac") spec.region_frac = as_double(value);
    else if (key == "g_newton") spec.g_newton = as_double(value);
    else if (key == "hbar") spec.hbar = as_double(value);
    else if (key == "eps_quantum") spec.eps_quantum = as_double(value);
    else if (key == "rho") spec.rho = as_double(value);
    else if (key == "serial") spec.opt.serial = as_bool(value);
    else throw InvalidInputError("unknown config key: " + key);
  }
}

}  // namespace ricci
