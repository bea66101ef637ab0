#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "divpath/laplacian.hpp"

namespace divpath {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-row compressed view of the kernel after thresholding.
struct SparseRows {
  std::vector<long> offsets;   // n + 1
  std::vector<int> columns;    // boundary slots, ascending per row
  std::vector<double> values;
  std::vector<double> logs;    // log of values
  std::vector<double> dropped; // per-row mass below the cut

  long row_size(int v) const { return offsets[v + 1] - offsets[v]; }
};

/// Discrete Poisson kernel: row v holds the harmonic measure of every
/// boundary vertex (columns in mesh.boundary_vertices() order) seen from v.
struct PoissonKernel {
  const TriMesh* mesh = nullptr;
  RowMatrix dense;  // n x k
  /// Filled by sparsify().
  std::optional<SparseRows> sparse;
  /// log(max(P, kLogFloor)) at every position, filled by sparsify().
  RowMatrix logdense;
  /// Relative cut used by sparsify(): entries with P * k < threshold dropped.
  double threshold = 0.0;

  int rows() const { return static_cast<int>(dense.rows()); }
  int cols() const { return static_cast<int>(dense.cols()); }
};

inline constexpr double kLogFloor = 1e-300;

/// One harmonic extension per boundary vertex, P_IB = -L_II^-1 L_IB, with
/// exact indicator rows on the boundary. `threads` <= 0 picks the hardware
/// concurrency. Variants other than Cotan solve with sparse LU and exist to
/// check that the kernel does not depend on the Laplacian scaling.
PoissonKernel poisson_kernel(const LaplacianSet& ls, LaplacianVariant variant = LaplacianVariant::Cotan,
                             int threads = 0);

struct KernelChecks {
  double max_row_sum_error = 0.0;
  double max_harmonic_residual = 0.0;  // relative to max |Lc| diagonal
  bool boundary_rows_exact = true;
  double min_entry = 0.0;
};

KernelChecks check_poisson_kernel(const LaplacianSet& ls, const PoissonKernel& pk);

}  // namespace divpath
