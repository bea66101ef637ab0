#include "divpath/solvers.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "divpath/error.hpp"
#include "divpath/poisson_kernel.hpp"

namespace divpath {

namespace {

double relative_residual(const Eigen::VectorXd& r, const Eigen::VectorXd& b) {
  const double bn = b.cwiseAbs().maxCoeff();
  return r.cwiseAbs().maxCoeff() / (bn > 0.0 ? bn : 1.0);
}

void check_vertex(const TriMesh& mesh, int v, const char* what) {
  if (v < 0 || v >= mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidTarget, std::string(what) + " " + std::to_string(v) + " out of range");
  }
}

ScalarField make_field(FieldKind kind, int target, Eigen::VectorXd raw, double orientation, double residual) {
  ScalarField f;
  f.kind = kind;
  f.target = target;
  f.values = orientation * raw;
  f.raw = std::move(raw);
  f.orientation = orientation;
  f.residual = residual;
  f.precision_warning = residual > kPrecisionWarningResidual;
  return f;
}

}  // namespace

ScalarField green_dirichlet(const LaplacianSet& ls, int p) {
  const TriMesh& mesh = ls.mesh();
  check_vertex(mesh, p, "target");
  if (mesh.is_boundary(p)) {
    throw Error(ErrorCode::InvalidTarget, "Dirichlet Green's function needs an interior target");
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(mesh.num_interior());
  e[mesh.interior_slot(p)] = 1.0;
  const Eigen::VectorXd x = ls.factor().solve(e);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int i = 0; i < mesh.num_interior(); ++i) raw[mesh.interior_vertices()[i]] = x[i];
  const double res = relative_residual(ls.L_II() * x - e, e);
  return make_field(FieldKind::DirichletGreen, p, std::move(raw), 1.0, res);
}

NeumannGreen::NeumannGreen(const LaplacianSet& ls, int r) : ls_(&ls), r_(r) {
  const int n = ls.mesh().num_vertices();
  check_vertex(ls.mesh(), r, "ground vertex");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Neumann Green's function needs two vertices");
  slot_.assign(n, -1);
  for (int v = 0, s = 0; v < n; ++v) {
    if (v != r) slot_[v] = s++;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int col = 0; col < ls.Lc().outerSize(); ++col) {
    if (col == r) continue;
    for (SparseMatrix::InnerIterator it(ls.Lc(), col); it; ++it) {
      if (it.row() == r) continue;
      trip.emplace_back(slot_[it.row()], slot_[col], -it.value());
    }
  }
  SparseMatrix K(n - 1, n - 1);
  K.setFromTriplets(trip.begin(), trip.end());
  llt_.compute(K);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::Factorization, "Cholesky of the grounded Laplacian failed");
  }
}

ScalarField NeumannGreen::field(int p) const {
  const TriMesh& mesh = ls_->mesh();
  check_vertex(mesh, p, "target");
  if (p == r_) throw Error(ErrorCode::InvalidTarget, "Neumann target must differ from the ground vertex");
  const int n = mesh.num_vertices();
  const Eigen::VectorXd& a = ls_->areas();
  Eigen::VectorXd rhs = -a / a.sum();
  rhs[p] += 1.0;
  Eigen::VectorXd b(n - 1);
  for (int v = 0; v < n; ++v) {
    if (slot_[v] >= 0) b[slot_[v]] = -rhs[v];
  }
  const Eigen::VectorXd x = llt_.solve(b);
  Eigen::VectorXd raw(n);
  for (int v = 0; v < n; ++v) raw[v] = slot_[v] >= 0 ? x[slot_[v]] : 0.0;
  raw.array() -= a.dot(raw) / a.sum();
  const double res = relative_residual(ls_->Lc() * raw - rhs, rhs);
  return make_field(FieldKind::NeumannGreen, p, std::move(raw), 1.0, res);
}

ScalarField green_neumann(const LaplacianSet& ls, int p, int r) {
  if (p == r) throw Error(ErrorCode::InvalidTarget, "Neumann target must differ from the ground vertex");
  return NeumannGreen(ls, r).field(p);
}

HeatSolver::HeatSolver(const LaplacianSet& ls, double t, BoundaryCondition bc) : ls_(&ls), t_(t), bc_(bc) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "heat time t must be positive");
  const TriMesh& mesh = ls.mesh();
  const SparseMatrix& L = bc == BoundaryCondition::Dirichlet ? ls.L_II() : ls.Lc();
  const int size = static_cast<int>(L.rows());
  SparseMatrix A(size, size);
  std::vector<Eigen::Triplet<double>> diag;
  for (int i = 0; i < size; ++i) {
    const int v = bc == BoundaryCondition::Dirichlet ? mesh.interior_vertices()[i] : i;
    diag.emplace_back(i, i, ls.areas()[v]);
  }
  A.setFromTriplets(diag.begin(), diag.end());
  system_ = A - t * L;
  if (size > 0) {
    llt_.compute(system_);
    if (llt_.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "Cholesky of the heat system failed");
  }
}

ScalarField HeatSolver::field(int p) const {
  const TriMesh& mesh = ls_->mesh();
  check_vertex(mesh, p, "target");
  const bool dir = bc_ == BoundaryCondition::Dirichlet;
  if (dir && mesh.is_boundary(p)) {
    throw Error(ErrorCode::InvalidTarget, "Dirichlet heat kernel needs an interior target");
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(system_.rows());
  e[dir ? mesh.interior_slot(p) : p] = ls_->areas()[p];
  const Eigen::VectorXd h = llt_.solve(e);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(mesh.num_vertices());
  if (dir) {
    for (int i = 0; i < mesh.num_interior(); ++i) raw[mesh.interior_vertices()[i]] = h[i];
  } else {
    raw = h;
  }
  const double res = relative_residual(system_ * h - e, e);
  ScalarField f = make_field(dir ? FieldKind::HeatDirichlet : FieldKind::HeatNeumann, p, std::move(raw), -1.0, res);
  f.params.t = t_;
  return f;
}

ScalarField heat_kernel(const LaplacianSet& ls, int p, double t, BoundaryCondition bc) {
  return HeatSolver(ls, t, bc).field(p);
}

struct SpectralDistances::Cache {
  std::once_flag r_once, b_once;
  Eigen::MatrixXd X, S;
};

namespace {

Eigen::MatrixXd grounded_inverse(Eigen::MatrixXd M) {
  const double shift = 1.0 / static_cast<double>(M.rows());
  M.array() += shift;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "dense Cholesky failed");
  return llt.solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));
}

ScalarField gram_distance(const Eigen::MatrixXd& G, int p, FieldKind kind) {
  const int n = static_cast<int>(G.rows());
  Eigen::VectorXd raw(n);
  for (int q = 0; q < n; ++q) raw[q] = G(p, p) + G(q, q) - 2.0 * G(p, q);
  raw[p] = 0.0;
  return make_field(kind, p, std::move(raw), 1.0, 0.0);
}

}  // namespace

SpectralDistances::SpectralDistances(const LaplacianSet& ls, int budget) : ls_(&ls), cache_(std::make_shared<Cache>()) {
  const int n = ls.mesh().num_vertices();
  if (n > budget) {
    throw Error(ErrorCode::TooLarge, "dense pseudo-inverse needs n <= " + std::to_string(budget) + ", mesh has " +
                                         std::to_string(n) + " vertices");
  }
}

const Eigen::MatrixXd& SpectralDistances::resistance_gram() const {
  std::call_once(cache_->r_once, [this] { cache_->X = grounded_inverse(-Eigen::MatrixXd(ls_->Lc())); });
  return cache_->X;
}

const Eigen::MatrixXd& SpectralDistances::biharmonic_gram() const {
  std::call_once(cache_->b_once, [this] {
    const SparseMatrix M = ls_->Lc() * ls_->areas().cwiseInverse().asDiagonal() * ls_->Lc();
    cache_->S = grounded_inverse(Eigen::MatrixXd(M));
  });
  return cache_->S;
}

ScalarField SpectralDistances::resistance_field(int p) const {
  check_vertex(ls_->mesh(), p, "target");
  return gram_distance(resistance_gram(), p, FieldKind::Resistance);
}

ScalarField SpectralDistances::biharmonic_field(int p) const {
  check_vertex(ls_->mesh(), p, "target");
  return gram_distance(biharmonic_gram(), p, FieldKind::Biharmonic);
}

ScalarField resistance_field(const LaplacianSet& ls, int p, int budget) {
  return SpectralDistances(ls, budget).resistance_field(p);
}

ScalarField biharmonic_field(const LaplacianSet& ls, int p, int budget) {
  return SpectralDistances(ls, budget).biharmonic_field(p);
}

double green_from_poisson(const PoissonKernel& pk, const TriMesh& mesh, int p, int z) {
  check_vertex(mesh, p, "pole");
  check_vertex(mesh, z, "evaluation vertex");
  if (p == z) throw Error(ErrorCode::InvalidArgument, "green_from_poisson: z equals p");
  const double inv2pi = 0.5 / std::numbers::pi;
  const Vec2& P = mesh.vertex(p);
  double sum = 0.0;
  for (int b = 0; b < mesh.num_boundary(); ++b) {
    const double w = pk.dense(z, b);
    if (w != 0.0) sum += w * std::log((P - mesh.vertex(mesh.boundary_vertices()[b])).norm());
  }
  return -inv2pi * std::log((mesh.vertex(z) - P).norm()) + inv2pi * sum;
}

double harmonic_measure(const PoissonKernel& pk, int z, std::span<const int> E) {
  const TriMesh& mesh = *pk.mesh;
  check_vertex(mesh, z, "vertex");
  double sum = 0.0;
  for (int v : E) {
    if (v < 0 || v >= mesh.num_vertices() || !mesh.is_boundary(v)) {
      throw Error(ErrorCode::InvalidArgument, "harmonic_measure: vertex " + std::to_string(v) + " is not on the boundary");
    }
    sum += pk.dense(z, mesh.boundary_slot(v));
  }
  return sum;
}

}  // namespace divpath
