#pragma once

#include <memory>
#include <span>

#include <Eigen/Dense>

#include "divpath/fields.hpp"
#include "divpath/laplacian.hpp"

namespace divpath {

struct PoissonKernel;

/// Relative residual above which fields carry precision_warning.
inline constexpr double kPrecisionWarningResidual = 1e-6;
/// Default cap on n for the dense pseudo-inverse distances.
inline constexpr int kDefaultDenseBudget = 4000;

/// Dirichlet Green's function: solves L_II D = e_p, zero on the boundary.
/// Raw values are <= 0 with the minimum at p.
ScalarField green_dirichlet(const LaplacianSet& ls, int p);

/// Neumann Green's function: Lc N = e_p - a / sum(a), grounded at r for the
/// solve and shifted so that sum(a * N) = 0.
ScalarField green_neumann(const LaplacianSet& ls, int p, int r);

/// Factors the grounded Neumann system once for many targets.
class NeumannGreen {
 public:
  NeumannGreen(const LaplacianSet& ls, int r);
  ScalarField field(int p) const;
  int ground() const { return r_; }

 private:
  const LaplacianSet* ls_;
  int r_;
  std::vector<int> slot_;  // vertex -> row in the grounded system, -1 for r
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

enum class BoundaryCondition { Dirichlet, Neumann };

/// One backward Euler step of the heat equation from a unit spike at p:
/// (A - t Lc) H = a_p e_p (restricted to the interior for Dirichlet). Values
/// are -H.
ScalarField heat_kernel(const LaplacianSet& ls, int p, double t, BoundaryCondition bc);

/// Factors the heat system for a fixed (t, bc) for many targets.
class HeatSolver {
 public:
  HeatSolver(const LaplacianSet& ls, double t, BoundaryCondition bc);
  ScalarField field(int p) const;

 private:
  const LaplacianSet* ls_;
  double t_;
  BoundaryCondition bc_;
  SparseMatrix system_;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

/// Dense pseudo-inverse distances. Both use the positive semidefinite
/// graph Laplacian K = -Lc so that resistances are positive:
///   R_pq = X_pp + X_qq - 2 X_pq, X = K^+
///   B_pq = S_pp + S_qq - 2 S_pq, S = (Lc A^-1 Lc)^+
/// The pseudo-inverses are formed as (M + 11^T/n)^-1, valid because the
/// mesh is connected.
class SpectralDistances {
 public:
  SpectralDistances(const LaplacianSet& ls, int budget = kDefaultDenseBudget);

  ScalarField resistance_field(int p) const;
  ScalarField biharmonic_field(int p) const;
  const Eigen::MatrixXd& resistance_gram() const;
  const Eigen::MatrixXd& biharmonic_gram() const;

 private:
  const LaplacianSet* ls_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

ScalarField resistance_field(const LaplacianSet& ls, int p, int budget = kDefaultDenseBudget);
ScalarField biharmonic_field(const LaplacianSet& ls, int p, int budget = kDefaultDenseBudget);

/// Dirichlet Green's function rebuilt from the Poisson kernel row of z:
/// -(1/2pi) log|z-p| + (1/2pi) sum_b P_zb log|p - s_b|.
double green_from_poisson(const PoissonKernel& pk, const TriMesh& mesh, int p, int z);

/// Harmonic measure of the boundary vertex set E seen from z.
double harmonic_measure(const PoissonKernel& pk, int z, std::span<const int> E);

}  // namespace divpath
