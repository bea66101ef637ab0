#include "divpath/laplacian.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "divpath/error.hpp"
#include "io_util.hpp"

namespace divpath {

InteriorFactor::InteriorFactor(const SparseMatrix& L_II) : size_(static_cast<int>(L_II.rows())) {
  if (size_ == 0) return;
  const SparseMatrix neg = -L_II;
  llt_.compute(neg);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::Factorization,
                "Cholesky of the interior Laplacian block failed: block is not definite "
                "(mesh is likely far from Delaunay)");
  }
}

Eigen::VectorXd InteriorFactor::solve(const Eigen::VectorXd& b) const {
  if (b.size() != size_) throw Error(ErrorCode::InvalidArgument, "InteriorFactor::solve: size mismatch");
  if (size_ == 0) return {};
  return -llt_.solve(b);
}

const InteriorFactor& LaplacianSet::factor() const {
  LazyFactor& lazy = *lazy_;
  std::call_once(lazy.once, [&] { lazy.factor = std::make_unique<InteriorFactor>(L_II_); });
  return *lazy.factor;
}

namespace {

double cot(const Vec2& apex, const Vec2& a, const Vec2& b) {
  const Vec2 u = a - apex, w = b - apex;
  const double cross = u.x() * w.y() - u.y() * w.x();
  if (cross == 0.0) throw Error(ErrorCode::Degenerate, "cotangent of a degenerate angle");
  return u.dot(w) / cross;
}

}  // namespace

LaplacianSet assemble_cotan(const TriMesh& mesh) {
  LaplacianSet ls;
  ls.mesh_ = &mesh;
  const int n = mesh.num_vertices();

  // One weight per undirected edge, so Lc is exactly symmetric.
  std::vector<double> weight(mesh.edges().size(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Tri& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
      const double c = cot(mesh.vertex(tri[k]), mesh.vertex(a), mesh.vertex(b));
      weight[mesh.find_edge(a, b)] += 0.5 * c;
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.edges().size() * 2 + n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    const Edge& edge = mesh.edges()[e];
    trip.emplace_back(edge.v0, edge.v1, weight[e]);
    trip.emplace_back(edge.v1, edge.v0, weight[e]);
    diag[edge.v0] -= weight[e];
    diag[edge.v1] -= weight[e];
  }
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);
  ls.Lc_.resize(n, n);
  ls.Lc_.setFromTriplets(trip.begin(), trip.end());
  ls.Lc_.makeCompressed();
  ls.diag_ = diag;
  ls.areas_ = mesh.vertex_areas();

  std::vector<Eigen::Triplet<double>> tii, tib;
  for (int col = 0; col < ls.Lc_.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(ls.Lc_, col); it; ++it) {
      const int ri = mesh.interior_slot(static_cast<int>(it.row()));
      if (ri < 0) continue;
      const int ci = mesh.interior_slot(col);
      if (ci >= 0) {
        tii.emplace_back(ri, ci, it.value());
      } else {
        tib.emplace_back(ri, mesh.boundary_slot(col), it.value());
      }
    }
  }
  ls.L_II_.resize(mesh.num_interior(), mesh.num_interior());
  ls.L_II_.setFromTriplets(tii.begin(), tii.end());
  ls.L_IB_.resize(mesh.num_interior(), mesh.num_boundary());
  ls.L_IB_.setFromTriplets(tib.begin(), tib.end());
  return ls;
}

AreaWeightedOperator::AreaWeightedOperator(const LaplacianSet& ls) : ls_(&ls) {
  if ((ls.areas().array() <= 0.0).any()) throw Error(ErrorCode::Degenerate, "zero vertex area");
}

Eigen::VectorXd AreaWeightedOperator::apply(const Eigen::VectorXd& v) const {
  return (ls_->Lc() * v).cwiseQuotient(ls_->areas());
}

NormalizedOperator::NormalizedOperator(const LaplacianSet& ls) : ls_(&ls) {
  if ((ls.diagonal().array() == 0.0).any()) throw Error(ErrorCode::Degenerate, "zero Laplacian diagonal");
}

Eigen::VectorXd NormalizedOperator::apply(const Eigen::VectorXd& v) const {
  return (ls_->Lc() * v).cwiseQuotient(ls_->diagonal());
}

AreaWeightedOperator area_weighted(const LaplacianSet& ls) { return AreaWeightedOperator(ls); }
NormalizedOperator normalized(const LaplacianSet& ls) { return NormalizedOperator(ls); }

const InteriorFactor& factor_interior(const LaplacianSet& ls) { return ls.factor(); }

SparseMatrix variant_matrix(const LaplacianSet& ls, LaplacianVariant variant) {
  switch (variant) {
    case LaplacianVariant::Cotan:
      return ls.Lc();
    case LaplacianVariant::AreaWeighted:
      return SparseMatrix(ls.areas().cwiseInverse().asDiagonal() * ls.Lc());
    case LaplacianVariant::Normalized:
      return SparseMatrix(ls.diagonal().cwiseInverse().asDiagonal() * ls.Lc());
  }
  return ls.Lc();
}

Eigen::VectorXd harmonic_extension(const LaplacianSet& ls, const Eigen::VectorXd& boundary_values,
                                   LaplacianVariant variant) {
  const TriMesh& mesh = ls.mesh();
  if (boundary_values.size() != mesh.num_boundary()) {
    throw Error(ErrorCode::InvalidArgument, "harmonic_extension: expected one value per boundary vertex");
  }
  Eigen::VectorXd interior;
  if (variant == LaplacianVariant::Cotan) {
    interior = ls.factor().solve(-(ls.L_IB() * boundary_values));
  } else if (mesh.num_interior() > 0) {
    const Eigen::VectorXd scale = variant == LaplacianVariant::AreaWeighted ? ls.areas() : ls.diagonal();
    Eigen::VectorXd s_I(mesh.num_interior());
    for (int i = 0; i < mesh.num_interior(); ++i) s_I[i] = 1.0 / scale[mesh.interior_vertices()[i]];
    const SparseMatrix A_II = s_I.asDiagonal() * ls.L_II();
    const SparseMatrix A_IB = s_I.asDiagonal() * ls.L_IB();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(A_II);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "sparse LU of interior block failed");
    interior = lu.solve(Eigen::VectorXd(-(A_IB * boundary_values)));
  }
  Eigen::VectorXd out(mesh.num_vertices());
  for (int b = 0; b < mesh.num_boundary(); ++b) out[mesh.boundary_vertices()[b]] = boundary_values[b];
  for (int i = 0; i < mesh.num_interior(); ++i) out[mesh.interior_vertices()[i]] = interior[i];
  return out;
}

void dump_coo(const LaplacianSet& ls, const std::filesystem::path& path) {
  std::ostringstream os;
  os.precision(17);
  os << "% " << ls.Lc().rows() << ' ' << ls.Lc().nonZeros() << '\n';
  for (int col = 0; col < ls.Lc().outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(ls.Lc(), col); it; ++it) {
      os << it.row() << ' ' << col << ' ' << it.value() << '\n';
    }
  }
  detail::write_file_atomic(path, os.str());
}

}  // namespace divpath
