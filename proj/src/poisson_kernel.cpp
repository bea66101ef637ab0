#include "divpath/poisson_kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include <Eigen/SparseLU>

#include "divpath/error.hpp"

namespace divpath {

PoissonKernel poisson_kernel(const LaplacianSet& ls, LaplacianVariant variant, int threads) {
  const TriMesh& mesh = ls.mesh();
  const int n = mesh.num_vertices(), k = mesh.num_boundary(), m = mesh.num_interior();
  PoissonKernel pk;
  pk.mesh = &mesh;
  pk.dense = RowMatrix::Zero(n, k);
  for (int b = 0; b < k; ++b) pk.dense(mesh.boundary_vertices()[b], b) = 1.0;
  if (m == 0) return pk;

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> solve;
  SparseMatrix rhs_block = ls.L_IB();
  std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu;
  if (variant == LaplacianVariant::Cotan) {
    const InteriorFactor& f = ls.factor();
    solve = [&f](const Eigen::VectorXd& b) { return f.solve(b); };
  } else {
    const Eigen::VectorXd& scale = variant == LaplacianVariant::AreaWeighted ? ls.areas() : ls.diagonal();
    Eigen::VectorXd s_I(m);
    for (int i = 0; i < m; ++i) s_I[i] = 1.0 / scale[mesh.interior_vertices()[i]];
    const SparseMatrix A_II = s_I.asDiagonal() * ls.L_II();
    rhs_block = s_I.asDiagonal() * ls.L_IB();
    lu = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    lu->compute(A_II);
    if (lu->info() != Eigen::Success) throw Error(ErrorCode::Factorization, "sparse LU of interior block failed");
    solve = [lu](const Eigen::VectorXd& b) { return Eigen::VectorXd(lu->solve(b)); };
  }

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, k);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (int b = next++; b < k; b = next++) {
        const Eigen::VectorXd rhs = -Eigen::VectorXd(rhs_block.col(b));
        const Eigen::VectorXd col = solve(rhs);
        for (int i = 0; i < m; ++i) pk.dense(mesh.interior_vertices()[i], b) = col[i];
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return pk;
}

KernelChecks check_poisson_kernel(const LaplacianSet& ls, const PoissonKernel& pk) {
  const TriMesh& mesh = ls.mesh();
  KernelChecks out;
  out.min_entry = pk.dense.size() ? pk.dense.minCoeff() : 0.0;
  for (int v = 0; v < pk.rows(); ++v) {
    out.max_row_sum_error = std::max(out.max_row_sum_error, std::abs(pk.dense.row(v).sum() - 1.0));
  }
  for (int b = 0; b < mesh.num_boundary(); ++b) {
    const int v = mesh.boundary_vertices()[b];
    for (int c = 0; c < pk.cols(); ++c) {
      if (pk.dense(v, c) != (c == b ? 1.0 : 0.0)) out.boundary_rows_exact = false;
    }
  }
  // Lc P restricted to interior rows, column by column.
  const double scale = ls.diagonal().cwiseAbs().maxCoeff();
  for (int c = 0; c < pk.cols(); ++c) {
    const Eigen::VectorXd r = ls.Lc() * pk.dense.col(c);
    for (int i : mesh.interior_vertices()) {
      out.max_harmonic_residual = std::max(out.max_harmonic_residual, std::abs(r[i]) / scale);
    }
  }
  return out;
}

}  // namespace divpath
