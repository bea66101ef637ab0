#include "divpath/methods.hpp"

#include "divpath/error.hpp"

namespace divpath {

const char* to_string(Family family) {
  switch (family) {
    case Family::Dirichlet:
      return "dirichlet";
    case Family::Neumann:
      return "neumann";
    case Family::HeatDirichlet:
      return "heat-dirichlet";
    case Family::HeatNeumann:
      return "heat-neumann";
    case Family::Spectral:
      return "spectral";
    case Family::Divergence:
      return "divergence";
  }
  return "?";
}

MethodSpec parse_method(std::string_view name, const FieldParams& params) {
  MethodSpec m;
  m.params = params;
  auto is = [&](std::string_view a, std::string_view b) { return name == a || name == b; };
  if (is("D", "dirichlet")) {
    m = {"D", FieldKind::DirichletGreen, Family::Dirichlet, {}};
  } else if (is("N", "neumann")) {
    m = {"N", FieldKind::NeumannGreen, Family::Neumann, {}};
  } else if (is("HD", "heat-dirichlet") || is("HN", "heat-neumann")) {
    const bool dir = is("HD", "heat-dirichlet");
    if (!params.t) throw Error(ErrorCode::InvalidArgument, "heat methods require the time parameter t");
    if (!(*params.t > 0.0)) throw Error(ErrorCode::InvalidArgument, "heat time t must be positive");
    m = {dir ? "HD" : "HN", dir ? FieldKind::HeatDirichlet : FieldKind::HeatNeumann,
         dir ? Family::HeatDirichlet : Family::HeatNeumann, {}};
    m.params.t = params.t;
  } else if (is("R", "resistance")) {
    m = {"R", FieldKind::Resistance, Family::Spectral, {}};
  } else if (is("B", "biharmonic")) {
    m = {"B", FieldKind::Biharmonic, Family::Spectral, {}};
  } else {
    const FDivergence f = builtin_f(name, params);  // validates the name and parameters
    m = {f.name, f.kind, Family::Divergence, {}};
    if (f.kind == FieldKind::Alpha) m.params.alpha = params.alpha;
    if (f.kind == FieldKind::Power) m.params.power = params.power;
  }
  return m;
}

FieldEngine::FieldEngine(const TriMesh& mesh, EngineOptions options) : mesh_(&mesh), options_(options) {}

const LaplacianSet& FieldEngine::laplacian() {
  if (!ls_) ls_ = std::make_unique<LaplacianSet>(assemble_cotan(*mesh_));
  return *ls_;
}

const PoissonKernel& FieldEngine::kernel() {
  if (!pk_) pk_ = std::make_unique<PoissonKernel>(poisson_kernel(laplacian(), LaplacianVariant::Cotan, options_.threads));
  return *pk_;
}

const PoissonKernel& FieldEngine::sparse_kernel() {
  if (!spk_) {
    const double tau = options_.threshold.value_or(default_threshold(mesh_->num_vertices()));
    spk_ = std::make_unique<PoissonKernel>(sparsify(kernel(), tau));
  }
  return *spk_;
}

SpectralDistances& FieldEngine::spectral() {
  if (!spectral_) spectral_ = std::make_unique<SpectralDistances>(laplacian(), options_.dense_budget);
  return *spectral_;
}

const NeumannGreen& FieldEngine::neumann(int ground) {
  auto& slot = neumann_[ground];
  if (!slot) slot = std::make_unique<NeumannGreen>(laplacian(), ground);
  return *slot;
}

const HeatSolver& FieldEngine::heat(double t, BoundaryCondition bc) {
  auto& slot = heat_[{t, static_cast<int>(bc)}];
  if (!slot) slot = std::make_unique<HeatSolver>(laplacian(), t, bc);
  return *slot;
}

ScalarField FieldEngine::compute(const MethodSpec& method, int target) {
  if (target < 0 || target >= mesh_->num_vertices()) {
    throw Error(ErrorCode::InvalidTarget, "target " + std::to_string(target) + " out of range");
  }
  switch (method.family) {
    case Family::Dirichlet:
      return green_dirichlet(laplacian(), target);
    case Family::Neumann:
      return neumann(neumann_ground(target)).field(target);
    case Family::HeatDirichlet:
      return heat(*method.params.t, BoundaryCondition::Dirichlet).field(target);
    case Family::HeatNeumann:
      return heat(*method.params.t, BoundaryCondition::Neumann).field(target);
    case Family::Spectral:
      return method.kind == FieldKind::Resistance ? spectral().resistance_field(target)
                                                  : spectral().biharmonic_field(target);
    case Family::Divergence: {
      const FDivergence f = builtin_f(method.name, method.params);
      if (options_.sparse) return dv_field_sparse(sparse_kernel(), f, target, options_.divergence);
      return dv_field(kernel(), f, target, options_.divergence, options_.threads);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method family");
}

}  // namespace divpath
