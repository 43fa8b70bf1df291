#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ricci/diagnostics.hpp"
#include "ricci/losses.hpp"
#include "ricci/optimizer.hpp"
#include "ricci/report.hpp"

namespace ricci {

enum class GraphKind { file, cycle, grid, random_regular, noisy_ring };
enum class LossKind { quadratic, rosenbrock_sum, synthetic_embedding };

// Everything needed to reproduce one run bit-for-bit.
struct BenchmarkSpec {
  std::string name = "custom";

  GraphKind graph_kind = GraphKind::cycle;
  std::string graph_path;
  int size = 32;
  int grid_rows = 0;  // 0 -> square from size
  int grid_cols = 0;
  int degree = 4;     // random-regular
  int chords = 8;     // noisy-ring
  int coord_dim = 2;
  int intrinsic_dim = 2;

  LossKind loss_kind = LossKind::quadratic;
  double condition_number = 100.0;
  double rosenbrock_a = 100.0;

  uint64_t seed = 1;
  double eps = 1e-6;
  int max_steps = 1000;
  double theta_scale = 1.0;

  OptimizerConfig opt;
  double beta = -1.0;    // flow coupling; < 0 -> 0.1 sqrt(n)
  double beta_w = -1.0;  // weight scale; < 0 -> 0.1 sqrt(n)
  MetricInit metric_init = MetricInit::weights;

  double p_drop = 0.5;
  double region_frac = 0.5;  // leading fraction of vertices forms the region
  double g_newton = 1.0;
  double hbar = 1.0;
  double eps_quantum = 0.01;
  double rho = 0.1;

  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Built-in presets: "Q1" (32-vertex cycle, condition-100 quadratic) and
// "T1" (noisy ring of 32 with 8 chords, seed 7).
BenchmarkSpec benchmark_preset(const std::string& name);

// Graph generators. All coordinates and theta values are seeded.
ParameterGraph make_cycle(int n, int coord_dim = 2, int intrinsic_dim = 2);
ParameterGraph make_grid(int rows, int cols, int intrinsic_dim = 2);
ParameterGraph make_random_regular(int n, int degree, uint64_t seed, int intrinsic_dim = 2);
ParameterGraph make_noisy_ring(int n, int chords, uint64_t seed, int intrinsic_dim = 2);

struct BenchmarkInstance {
  ParameterGraph graph;
  MetricState metric;
  std::vector<double> theta0;
  std::unique_ptr<LossOracle> loss;
};

// Materializes graph, metric, initial parameters and loss for a spec.
BenchmarkInstance build_benchmark(const BenchmarkSpec& spec);

// Full pipeline: build, optimize, final diagnostics, spec echo.
RunReport run_benchmark(const BenchmarkSpec& spec);

struct BaselineRow {
  std::string name;
  int steps_to_eps = -1;
  double final_loss = 0.0;
  double final_lyapunov = 0.0;
  double wall_ms = 0.0;
  bool diverged = false;
  double speedup_vs_plain = 0.0;  // steps ratio; 0 when undefined
};

struct CompareTable {
  std::vector<BaselineRow> rows;
};

// Runs the geometric optimizer plus the requested baselines
// ("plain-gd", "decoupled-flow", "fixed-lr-geometric") on one spec.
CompareTable compare_baselines(const BenchmarkSpec& spec,
                               const std::vector<std::string>& baselines);
void write_compare_csv(const CompareTable& table, std::ostream& out);

struct ScalingEntry {
  int size = 0;
  double median_s = 0.0;
  double iqr_s = 0.0;
  double cov = 0.0;   // coefficient of variation over timed steps
  bool rerun = false; // cov > 0.5
};

struct ScalingResult {
  std::vector<ScalingEntry> entries;
  double slope = 0.0;  // log-log fit of median step time vs size
  bool slope_defined = false;
};

// Times meta-optimizer steps on random-regular(degree) graphs of the
// given sizes; Sinkhorn transport, curvature recomputed every step.
ScalingResult scaling_study(const std::vector<int>& sizes, const BenchmarkSpec& tmpl,
                            int timed_steps = 3);
void write_scaling_plotdata(const ScalingResult& result, std::ostream& out);
void write_scaling_csv(const ScalingResult& result, std::ostream& out);

// Key-value config file: one "key value" (or key=value) pair per line,
// '#' comments. Returns the parsed pairs; apply_config folds them into
// a spec and rejects unknown keys.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config(BenchmarkSpec& spec, const std::map<std::string, std::string>& kv);

}  // namespace ricci
