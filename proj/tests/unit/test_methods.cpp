#include "doctest.h"

#include "divpath/bench.hpp"
#include "divpath/domains.hpp"
#include "divpath/error.hpp"
#include "divpath/methods.hpp"

using namespace divpath;

TEST_CASE("method names") {
  CHECK(parse_method("D", {}).family == Family::Dirichlet);
  CHECK(parse_method("neumann", {}).name == "N");
  CHECK(parse_method("R", {}).kind == FieldKind::Resistance);
  CHECK(parse_method("biharmonic", {}).kind == FieldKind::Biharmonic);
  CHECK(parse_method("kl", {}).family == Family::Divergence);
  const MethodSpec hd = parse_method("HD", {0.5, std::nullopt, std::nullopt});
  CHECK(hd.kind == FieldKind::HeatDirichlet);
  CHECK(*hd.params.t == 0.5);
  CHECK_THROWS_AS(parse_method("HN", {}), Error);
  CHECK_THROWS_AS(parse_method("HD", {-1.0, std::nullopt, std::nullopt}), Error);
  CHECK_THROWS_AS(parse_method("alpha", {}), Error);
  CHECK_THROWS_AS(parse_method("geodesic", {}), Error);
  for (auto k : {FieldKind::DirichletGreen, FieldKind::HeatNeumann, FieldKind::Power, FieldKind::CustomF}) {
    CHECK(field_kind_from_string(to_string(k)) == k);
  }
  CHECK_FALSE(field_kind_from_string("nope"));
}

TEST_CASE("engine caches and dispatches") {
  const TriMesh m = make_test_mesh("convex-holes", 175);
  FieldEngine engine(m);
  const int t = m.interior_vertices()[4];
  for (const char* name : {"D", "N", "R", "B", "tv", "kl", "chi2", "hellinger"}) {
    CAPTURE(name);
    const ScalarField f = engine.compute(parse_method(name, {}), t);
    CHECK(f.target == t);
    Eigen::Index arg;
    f.values.minCoeff(&arg);
    CHECK(arg == t);
  }
  CHECK(&engine.laplacian() == &engine.laplacian());
  CHECK(&engine.kernel() == &engine.kernel());
  CHECK(FieldEngine::neumann_ground(0) == 1);
  CHECK(FieldEngine::neumann_ground(5) == 0);
  CHECK_THROWS_AS(engine.compute(parse_method("D", {}), m.num_vertices()), Error);

  EngineOptions sparse;
  sparse.sparse = true;
  sparse.threshold = 0.0;
  FieldEngine se(m, sparse);
  const ScalarField a = engine.compute(parse_method("kl", {}), t);
  const ScalarField b = se.compute(parse_method("kl", {}), t);
  for (int v : m.interior_vertices()) CHECK(a.values[v] == b.values[v]);
}

TEST_CASE("benchmark report") {
  const TriMesh m = make_test_mesh("corridor", 400);
  BenchOptions opt;
  opt.domain = "corridor";
  opt.trials = 2;
  opt.warmup = 0;
  const auto [s, t] = default_endpoints(m);
  CHECK(s != t);
  CHECK_FALSE(m.is_boundary(s));
  CHECK_FALSE(m.is_boundary(t));
  const BenchmarkReport r = run_benchmark(m, {parse_method("D", {}), parse_method("kl", {}), parse_method("tv", {})}, opt);
  CHECK(r.n == m.num_vertices());
  CHECK(r.methods.size() == 3);
  CHECK_FALSE(r.methods[0].path_only_applicable);
  CHECK(r.methods[0].online_path_ms == r.methods[0].online_full_ms);
  CHECK(r.methods[1].path_only_applicable);
  CHECK(r.methods[1].path_vertices > 0);
  CHECK(r.methods[1].path_vertices < r.n);
  CHECK(r.ops_dense_per_pair == m.num_boundary());
  CHECK(r.ops_sparse_per_pair < r.ops_dense_per_pair);
  Json j = to_json(r);
  CHECK(validate_benchmark_report(j).empty());
  j.erase("n");
  j["methods"][0]["online_full_ms"] = -1.0;
  CHECK(validate_benchmark_report(j).size() == 2);
  CHECK(time_median_ms([] {}, 3, 1) >= 0.0);
}
