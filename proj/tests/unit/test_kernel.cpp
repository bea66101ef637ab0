#include "doctest.h"

#include "divpath/domains.hpp"
#include "divpath/poisson_kernel.hpp"

using namespace divpath;

TEST_CASE("kernel rows are harmonic measures") {
  const TriMesh m = make_test_mesh("convex-holes", 400);
  const LaplacianSet ls = assemble_cotan(m);
  const PoissonKernel pk = poisson_kernel(ls);
  CHECK(pk.rows() == m.num_vertices());
  CHECK(pk.cols() == m.num_boundary());
  CHECK(pk.mesh == &m);
  const KernelChecks c = check_poisson_kernel(ls, pk);
  CHECK(c.max_row_sum_error < 1e-12);
  CHECK(c.max_harmonic_residual < 1e-12);
  CHECK(c.boundary_rows_exact);
  CHECK(c.min_entry >= -1e-15);
  // column b is the harmonic extension of the indicator of boundary slot b
  for (int b : {0, 17, m.num_boundary() - 1}) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m.num_boundary());
    e[b] = 1.0;
    const Eigen::VectorXd col = harmonic_extension(ls, e);
    CHECK((col - pk.dense.col(b)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("thread count does not change the kernel") {
  const TriMesh m = generate_disk_mesh(8);
  const LaplacianSet ls = assemble_cotan(m);
  const PoissonKernel a = poisson_kernel(ls, LaplacianVariant::Cotan, 1);
  const PoissonKernel b = poisson_kernel(ls, LaplacianVariant::Cotan, 3);
  CHECK((a.dense - b.dense).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("variant kernels") {
  const TriMesh m = make_test_mesh("concave", 300);
  const LaplacianSet ls = assemble_cotan(m);
  for (auto v : {LaplacianVariant::AreaWeighted, LaplacianVariant::Normalized}) {
    const PoissonKernel pk = poisson_kernel(ls, v);
    const RowMatrix ones = pk.dense.rowwise().sum();
    CHECK((ones.array() - 1.0).abs().maxCoeff() < 1e-10);
    // the interior rows of each variant annihilate the same harmonic functions
    const PoissonKernel base = poisson_kernel(ls);
    CHECK((pk.dense - base.dense).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("checks detect a corrupted kernel") {
  const TriMesh m = generate_disk_mesh(4);
  const LaplacianSet ls = assemble_cotan(m);
  PoissonKernel pk = poisson_kernel(ls);
  pk.dense(m.interior_vertices()[2], 0) += 1e-3;
  pk.dense(m.boundary_vertices()[1], 3) = 1e-9;
  const KernelChecks c = check_poisson_kernel(ls, pk);
  CHECK(c.max_row_sum_error > 1e-4);
  CHECK(c.max_harmonic_residual > 1e-6);
  CHECK_FALSE(c.boundary_rows_exact);
}
