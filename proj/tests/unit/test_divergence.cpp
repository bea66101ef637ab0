#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "divpath/divergence.hpp"
#include "divpath/domains.hpp"
#include "divpath/error.hpp"
#include "divpath/solvers.hpp"
#include "../support.hpp"

using namespace divpath;

namespace {

struct Fixture {
  TriMesh mesh = make_test_mesh("concave", 500);
  LaplacianSet ls = assemble_cotan(mesh);
  PoissonKernel pk = poisson_kernel(ls);
  int p = mesh.interior_vertices()[5];
  int q = mesh.interior_vertices()[200];
};

const FieldParams kAlpha{std::nullopt, 0.5, std::nullopt};
const FieldParams kPower{std::nullopt, std::nullopt, 3};

std::vector<FDivergence> all_builtins() {
  return {builtin_f("tv"), builtin_f("kl"), builtin_f("chi2"), builtin_f("hellinger"), builtin_f("alpha", kAlpha),
          builtin_f("power", kPower)};
}

}  // namespace

TEST_CASE("builtin generators") {
  for (const auto& d : all_builtins()) {
    CAPTURE(d.name);
    CHECK(d.f(1.0) == doctest::Approx(0.0).scale(1.0));
    // convexity on a grid
    for (double x = 0.05; x < 5.0; x += 0.05) CHECK(d.f(x - 0.01) + d.f(x + 0.01) >= 2.0 * d.f(x) - 1e-12);
  }
  CHECK(builtin_f("tv").f(0.25) == doctest::Approx(0.75));
  CHECK(builtin_f("kl").f(2.0) == doctest::Approx(-std::log(2.0)));
  CHECK(builtin_f("hellinger").f(4.0) == doctest::Approx(1.0));
  CHECK(builtin_f("power", kPower).f(3.0) == doctest::Approx(8.0));
  CHECK_FALSE(builtin_f("tv").strictly_convex);
  CHECK_FALSE(builtin_f("power", {std::nullopt, std::nullopt, 1}).strictly_convex);
  CHECK(builtin_f("power-p", kPower).name == "power");
  CHECK_THROWS_AS(builtin_f("alpha"), Error);
  CHECK_THROWS_AS(builtin_f("alpha", {std::nullopt, 1.0, std::nullopt}), Error);
  CHECK_THROWS_AS(builtin_f("power", {std::nullopt, std::nullopt, 0}), Error);
  CHECK_THROWS_AS(builtin_f("js"), Error);
}

TEST_CASE("custom generators are validated") {
  const FDivergence sq = custom_f("sq", [](double x) { return (x - 1) * (x - 1) * (x - 1) * (x - 1); });
  CHECK(sq.kind == FieldKind::CustomF);
  CHECK_THROWS_AS(custom_f("shifted", [](double x) { return x * x; }), Error);
  CHECK_THROWS_AS(custom_f("concave", [](double x) { return std::log(x); }), Error);
  CHECK_THROWS_AS(custom_f("empty", {}), Error);
}

TEST_CASE("pair values match the defining sums") {
  Fixture fx;
  const int k = fx.pk.cols();
  for (const auto& d : all_builtins()) {
    CAPTURE(d.name);
    double want = 0.0;
    for (int b = 0; b < k; ++b) {
      const double wq = fx.pk.dense(fx.q, b), wp = fx.pk.dense(fx.p, b);
      want += wq * d.f(wp / wq);
    }
    OpCounter ops;
    const double got = dv_pair(fx.pk, d, fx.p, fx.q, {}, &ops);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(ops.ops == k);
    CHECK(got >= 0.0);
    CHECK(dv_pair(fx.pk, d, fx.p, fx.p) == doctest::Approx(0.0).scale(1.0));
    // weighting by the target row swaps the arguments
    DivergenceOptions swapped;
    swapped.weight_by_target = true;
    CHECK(dv_pair(fx.pk, d, fx.p, fx.q, swapped) == doctest::Approx(dv_pair(fx.pk, d, fx.q, fx.p)).epsilon(1e-12));
  }
  CHECK(dv_pair(fx.pk, builtin_f("tv"), fx.p, fx.q) <= 2.0);
  // a custom copy of KL matches the specialised KL
  const FDivergence ckl = custom_f("kl2", [](double x) { return -std::log(x); });
  CHECK(dv_pair(fx.pk, ckl, fx.p, fx.q) == doctest::Approx(dv_pair(fx.pk, builtin_f("kl"), fx.p, fx.q)).epsilon(1e-12));
}

TEST_CASE("fields") {
  Fixture fx;
  const FDivergence kl = builtin_f("kl");
  const ScalarField f = dv_field(fx.pk, kl, fx.p);
  CHECK(f.kind == FieldKind::KL);
  CHECK(f.values[fx.p] == doctest::Approx(0.0).scale(1.0));
  for (int v = 0; v < fx.mesh.num_vertices(); v += 37) CHECK(f.values[v] == dv_pair(fx.pk, kl, fx.p, v));
  CHECK_FALSE(f.precision_warning);
  CHECK(f.clamp_count == 0);
  // boundary query rows are indicators: the generic sum clamps their zeros
  // but leaves the warning off
  const ScalarField c = dv_field(fx.pk, builtin_f("chi2"), fx.p);
  CHECK(c.clamp_count > 0);
  CHECK_FALSE(c.precision_warning);
  const ScalarField g = dv_field(fx.pk, kl, fx.p, {}, 1);
  CHECK((g.values - f.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero denominators") {
  Fixture fx;
  const int b = fx.mesh.boundary_vertices()[0];
  DivergenceOptions strict;
  strict.clamp = false;
  try {
    dv_pair(fx.pk, builtin_f("chi2"), fx.p, b, strict);
    FAIL("expected DivisionDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionDomain);
  }
  // KL only clamps zeros of the other row
  ClampStats stats;
  const double v = dv_pair(fx.pk, builtin_f("kl"), b, fx.q, {}, nullptr, &stats);
  CHECK(std::isfinite(v));
  CHECK(stats.clamps > 0);
}

TEST_CASE("sparsification") {
  Fixture fx;
  CHECK(default_threshold(100) == doctest::Approx(0.1));
  CHECK_THROWS_AS(sparsify(fx.pk, 1.0), Error);
  CHECK_THROWS_AS(sparsify(fx.pk, -0.1), Error);
  CHECK_THROWS_AS(dv_pair_sparse(fx.pk, builtin_f("kl"), fx.p, fx.q), Error);

  const double tau = default_threshold(fx.mesh.num_vertices());
  const PoissonKernel sk = sparsify(fx.pk, tau);
  REQUIRE(sk.sparse);
  const SparseRows& s = *sk.sparse;
  const int k = sk.cols();
  double max_dropped = 0.0;
  for (int v = 0; v < sk.rows(); ++v) {
    double kept = 0.0;
    for (long j = s.offsets[v]; j < s.offsets[v + 1]; ++j) {
      if (j > s.offsets[v]) CHECK(s.columns[j] > s.columns[j - 1]);
      CHECK(s.values[j] * k >= tau);
      CHECK(s.logs[j] == std::log(s.values[j]));
      kept += s.values[j];
    }
    CHECK(kept + s.dropped[v] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.dropped[v] < tau + 1e-12);
    max_dropped = std::max(max_dropped, s.dropped[v]);
  }
  const SparsityReport rep = sparsity_report(sk);
  CHECK(rep.threshold == tau);
  CHECK(rep.percent > 0.0);
  CHECK(rep.percent < 100.0);
  CHECK(rep.max_dropped_mass == doctest::Approx(max_dropped));

  const FDivergence kl = builtin_f("kl"), tv = builtin_f("tv");
  OpCounter dense_ops, sparse_ops;
  const double dk = dv_pair(fx.pk, kl, fx.p, fx.q, {}, &dense_ops);
  const double sk_kl = dv_pair_sparse(sk, kl, fx.p, fx.q, {}, &sparse_ops);
  CHECK(std::abs(sk_kl - dk) < 0.02 * dk);
  CHECK(sparse_ops.ops <= dense_ops.ops);
  CHECK(std::abs(dv_pair_sparse(sk, tv, fx.p, fx.q) - dv_pair(fx.pk, tv, fx.p, fx.q)) < 2 * tau);
}

TEST_CASE("threshold zero reproduces dense values") {
  Fixture fx;
  const PoissonKernel s0 = sparsify(fx.pk, 0.0);
  for (const auto& d : all_builtins()) {
    CAPTURE(d.name);
    const ScalarField a = dv_field(fx.pk, d, fx.p);
    const ScalarField b = dv_field_sparse(s0, d, fx.p);
    for (int v : fx.mesh.interior_vertices()) CHECK(a.values[v] == b.values[v]);
  }
}

namespace {

struct Disk {
  TriMesh mesh = generate_disk_mesh(40);
  LaplacianSet ls = assemble_cotan(mesh);
  PoissonKernel pk = poisson_kernel(ls);
};

const Disk& disk40() {
  static const Disk d;
  return d;
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const Eigen::Map<const Eigen::VectorXd> a(rx.data(), rx.size()), b(ry.data(), ry.size());
  const Eigen::VectorXd ca = a.array() - a.mean(), cb = b.array() - b.mean();
  return ca.dot(cb) / (ca.norm() * cb.norm());
}

}  // namespace

TEST_CASE("alpha approaches KL as alpha goes to -1") {
  const FDivergence a = builtin_f("alpha", {std::nullopt, -0.999, std::nullopt});
  const FDivergence kl = builtin_f("kl");
  for (double x = 0.5; x <= 2.0 + 1e-12; x += 0.05) CHECK(std::abs(a.f(x) - kl.f(x)) < 1e-3);
}

TEST_CASE("nonnegativity and identity on a small disk") {
  const TriMesh m = generate_disk_mesh(7);
  REQUIRE(m.num_vertices() <= 200);
  const PoissonKernel pk = poisson_kernel(assemble_cotan(m));
  for (const auto& d : all_builtins()) {
    if (!d.strictly_convex) continue;
    CAPTURE(d.name);
    int bad = 0;
    for (int p = 0; p < m.num_vertices(); ++p) {
      for (int q = 0; q < m.num_vertices(); ++q) {
        const double v = dv_pair(pk, d, p, q);
        if (p == q ? v != 0.0 : !(v > 0.0)) ++bad;
      }
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("TV from a boundary query") {
  Fixture fx;
  const FDivergence tv = builtin_f("tv");
  for (int i = 0; i < fx.mesh.num_boundary(); i += 7) {
    const int b = fx.mesh.boundary_vertices()[i];
    CHECK(dv_pair(fx.pk, tv, fx.p, b) == doctest::Approx(2.0 * (1.0 - fx.pk.dense(fx.p, i))).epsilon(1e-12));
  }
}

TEST_CASE("disk fields from the centre match the closed forms") {
  const Disk& dk = disk40();
  const TriMesh& m = dk.mesh;
  const ScalarField kl = dv_field(dk.pk, builtin_f("kl"), 0);
  const ScalarField tv = dv_field(dk.pk, builtin_f("tv"), 0);
  const ScalarField chi = dv_field(dk.pk, builtin_f("chi2"), 0);
  // ring i sits at radius i / 40
  const auto on_ring = [&](int ring) {
    std::vector<int> vs;
    for (int v = 0; v < m.num_vertices(); ++v) {
      if (std::abs(m.vertex(v).norm() - ring / 40.0) < 1e-9) vs.push_back(v);
    }
    return vs;
  };
  for (int v : on_ring(24)) CHECK(kl.values[v] == doctest::Approx(-std::log(1.0 - 0.36)).epsilon(0.02));
  for (int v : on_ring(20)) CHECK(chi.values[v] == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  // no ring at 1/sqrt2: interpolate between rings 28 and 29
  const double r0 = 28 / 40.0, r1 = 29 / 40.0, x = 1.0 / std::sqrt(2.0);
  const auto mean_on = [&](int ring) {
    double s = 0.0;
    const auto vs = on_ring(ring);
    for (int v : vs) s += tv.values[v];
    return s / vs.size();
  };
  const double at = mean_on(28) + (mean_on(29) - mean_on(28)) * (x - r0) / (r1 - r0);
  CHECK(at == doctest::Approx(1.0).epsilon(0.02));
  for (int v = 0; v < m.num_vertices(); ++v) {
    CHECK(tv.values[v] >= 0.0);
    CHECK(tv.values[v] <= 2.0 + 1e-12);
  }
}

TEST_CASE("divergence fields are subharmonic on the disk") {
  const Disk& dk = disk40();
  const TriMesh& m = dk.mesh;
  for (const std::string name : {"kl", "tv", "chi2", "hellinger"}) {
    CAPTURE(name);
    for (const Vec2 at : {Vec2(0.0, 0.0), Vec2(0.4, -0.3)}) {
      const int p = testing::nearest_vertex(m, at);
      const ScalarField f = dv_field(dk.pk, builtin_f(name), p);
      const Eigen::VectorXd lf = dk.ls.Lc() * f.values;
      const double tol = 1e-6 * f.values.cwiseAbs().maxCoeff();
      int ok = 0, total = 0;
      for (int q : m.interior_vertices()) {
        if (q == p) continue;
        ++total;
        if (lf[q] >= -tol) ++ok;
      }
      CHECK(ok >= 0.99 * total);
    }
  }
}

TEST_CASE("KL near the boundary tracks the log of the Green's function") {
  const TriMesh m = make_test_mesh("long-corridor", 3000);
  const LaplacianSet ls = assemble_cotan(m);
  const PoissonKernel pk = poisson_kernel(ls);
  Vec2 lo = m.vertex(0), hi = m.vertex(0);
  for (int v = 0; v < m.num_vertices(); ++v) {
    lo = lo.cwiseMin(m.vertex(v));
    hi = hi.cwiseMax(m.vertex(v));
  }
  const int p = testing::nearest_vertex(m, (lo + hi) / 2);
  const ScalarField kl = dv_field(pk, builtin_f("kl"), p);
  const ScalarField d = green_dirichlet(ls, p);
  std::vector<char> near(m.num_vertices(), 0);
  for (const Edge& e : m.edges()) {
    if (m.is_boundary(e.v0) != m.is_boundary(e.v1)) near[m.is_boundary(e.v0) ? e.v1 : e.v0] = 1;
  }
  std::vector<double> a, b;
  for (int q = 0; q < m.num_vertices(); ++q) {
    if (!near[q] || q == p) continue;
    a.push_back(kl.values[q]);
    b.push_back(-std::log(-d.raw[q]));
  }
  REQUIRE(a.size() > 100);
  CHECK(spearman(a, b) > 0.95);
}
