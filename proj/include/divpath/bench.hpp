#pragma once

#include <string>
#include <vector>

#include "divpath/io.hpp"
#include "divpath/methods.hpp"

namespace divpath {

struct MethodTiming {
  std::string method;
  std::string family;
  double online_full_ms = 0.0;
  /// Divergences only: the full field on the sparsified kernel.
  double online_full_sparse_ms = 0.0;
  /// Divergences: sparse sums at the path-relevant vertices only. Linear
  /// solves produce the whole field at once, so this equals online_full_ms.
  double online_path_ms = 0.0;
  bool path_only_applicable = false;
  int path_vertices = 0;
  std::string path_status;
};

struct BenchmarkReport {
  std::string domain;
  int n = 0;
  int k = 0;
  int source = -1;
  int target = -1;
  int trials = 0;
  int warmup = 0;
  double assembly_ms = 0.0;
  /// Preprocessing time per family, in the order first met.
  std::vector<std::pair<std::string, double>> preproc_ms;
  std::vector<MethodTiming> methods;
  double threshold = 0.0;
  double sparsity_percent = 0.0;
  double max_dropped_mass = 0.0;
  long ops_dense_per_pair = 0;
  double ops_sparse_per_pair = 0.0;
  Json machine;
};

struct BenchOptions {
  std::string domain = "mesh";
  int trials = 11;
  int warmup = 3;
  /// -1 picks defaults: target nearest the bounding-box centre, source the
  /// interior vertex farthest from it.
  int source = -1;
  int target = -1;
  EngineOptions engine;
};

/// Median wall time in milliseconds over `trials` runs after `warmup`.
double time_median_ms(const std::function<void()>& fn, int trials, int warmup);

/// Default (source, target) pair used by bench when none is given.
std::pair<int, int> default_endpoints(const TriMesh& mesh);

BenchmarkReport run_benchmark(const TriMesh& mesh, const std::vector<MethodSpec>& methods, const BenchOptions& options);

Json to_json(const BenchmarkReport& report);

/// Structural check of a report against the documented schema; returns the
/// list of violations (empty when valid).
std::vector<std::string> validate_benchmark_report(const Json& report);

}  // namespace divpath
