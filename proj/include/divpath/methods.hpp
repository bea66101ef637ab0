#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "divpath/divergence.hpp"
#include "divpath/solvers.hpp"

namespace divpath {

/// Methods sharing a preprocessing step.
enum class Family { Dirichlet, Neumann, HeatDirichlet, HeatNeumann, Spectral, Divergence };
const char* to_string(Family family);

struct MethodSpec {
  std::string name;  // canonical short name, e.g. "D", "kl"
  FieldKind kind = FieldKind::DirichletGreen;
  Family family = Family::Dirichlet;
  FieldParams params;
};

/// Accepts D, N, HD, HN, R, B (or dirichlet, neumann, heat-dirichlet,
/// heat-neumann, resistance, biharmonic) and the divergence names tv, kl,
/// chi2, hellinger, alpha, power. Heat methods need params.t.
MethodSpec parse_method(std::string_view name, const FieldParams& params = {});

struct EngineOptions {
  int dense_budget = kDefaultDenseBudget;
  /// Sparsification threshold; unset means 1/sqrt(n).
  std::optional<double> threshold;
  /// Evaluate divergences on the sparsified kernel.
  bool sparse = false;
  DivergenceOptions divergence;
  int threads = 0;
};

/// Computes fields on one mesh, caching every target-independent step.
class FieldEngine {
 public:
  FieldEngine(const TriMesh& mesh, EngineOptions options = {});

  ScalarField compute(const MethodSpec& method, int target);

  const TriMesh& mesh() const { return *mesh_; }
  const EngineOptions& options() const { return options_; }
  const LaplacianSet& laplacian();
  const PoissonKernel& kernel();
  const PoissonKernel& sparse_kernel();
  SpectralDistances& spectral();
  const NeumannGreen& neumann(int ground);
  const HeatSolver& heat(double t, BoundaryCondition bc);

  /// Neumann ground vertex used for target p.
  static int neumann_ground(int p) { return p == 0 ? 1 : 0; }

 private:
  const TriMesh* mesh_;
  EngineOptions options_;
  std::unique_ptr<LaplacianSet> ls_;
  std::unique_ptr<PoissonKernel> pk_, spk_;
  std::unique_ptr<SpectralDistances> spectral_;
  std::map<int, std::unique_ptr<NeumannGreen>> neumann_;
  std::map<std::pair<double, int>, std::unique_ptr<HeatSolver>> heat_;
};

}  // namespace divpath
