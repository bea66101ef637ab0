#pragma once

#include <filesystem>
#include <memory>
#include <mutex>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "divpath/mesh.hpp"

namespace divpath {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Prefactored interior block. The block is negative definite in the sign
/// convention used throughout (negative diagonal), so -L_II is factored and
/// the sign is restored in solve(). Solves are const and may run
/// concurrently.
class InteriorFactor {
 public:
  explicit InteriorFactor(const SparseMatrix& L_II);

  int size() const { return size_; }
  /// x with L_II x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  int size_ = 0;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

/// Cotangent Laplacian of a mesh with its interior/boundary blocks.
///
/// Lc has nonnegative off-diagonal weights on Delaunay meshes and a negative
/// diagonal; every row sums to zero. Blocks use the ordering of
/// mesh.interior_vertices() and mesh.boundary_vertices().
class LaplacianSet {
 public:
  const TriMesh& mesh() const { return *mesh_; }
  const SparseMatrix& Lc() const { return Lc_; }
  const Eigen::VectorXd& areas() const { return areas_; }
  const SparseMatrix& L_II() const { return L_II_; }
  const SparseMatrix& L_IB() const { return L_IB_; }
  /// Diagonal of Lc.
  const Eigen::VectorXd& diagonal() const { return diag_; }

  /// Factorization of L_II, built on first use.
  const InteriorFactor& factor() const;

 private:
  friend LaplacianSet assemble_cotan(const TriMesh& mesh);

  const TriMesh* mesh_ = nullptr;
  SparseMatrix Lc_, L_II_, L_IB_;
  Eigen::VectorXd areas_, diag_;
  struct LazyFactor {
    std::once_flag once;
    std::unique_ptr<InteriorFactor> factor;
  };
  std::shared_ptr<LazyFactor> lazy_ = std::make_shared<LazyFactor>();
};

/// Assembles Lc. The mesh must outlive the returned set.
LaplacianSet assemble_cotan(const TriMesh& mesh);

/// Matrix-free L = A^-1 Lc.
class AreaWeightedOperator {
 public:
  explicit AreaWeightedOperator(const LaplacianSet& ls);
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

 private:
  const LaplacianSet* ls_;
};

/// Matrix-free Ln = Z^-1 Lc with Z = diag(Lc).
class NormalizedOperator {
 public:
  explicit NormalizedOperator(const LaplacianSet& ls);
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

 private:
  const LaplacianSet* ls_;
};

AreaWeightedOperator area_weighted(const LaplacianSet& ls);
NormalizedOperator normalized(const LaplacianSet& ls);

/// Factors the interior block. Same object as ls.factor().
const InteriorFactor& factor_interior(const LaplacianSet& ls);

enum class LaplacianVariant { Cotan, AreaWeighted, Normalized };

/// Row-scaled sparse copy of Lc for the chosen variant.
SparseMatrix variant_matrix(const LaplacianSet& ls, LaplacianVariant variant);

/// Extends boundary data (indexed by boundary slot) harmonically into the
/// interior. Cotan uses the Cholesky factor; the other variants solve their
/// own (nonsymmetric) interior block with sparse LU.
Eigen::VectorXd harmonic_extension(const LaplacianSet& ls, const Eigen::VectorXd& boundary_values,
                                   LaplacianVariant variant = LaplacianVariant::Cotan);

/// Coordinate-format text dump of Lc: one "row col value" line per stored
/// entry, 0-based, after a "% n nnz" header line.
void dump_coo(const LaplacianSet& ls, const std::filesystem::path& path);

}  // namespace divpath
