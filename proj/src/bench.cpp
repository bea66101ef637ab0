#include "divpath/bench.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "divpath/error.hpp"
#include "divpath/paths.hpp"

namespace divpath {

double time_median_ms(const std::function<void()>& fn, int trials, int warmup) {
  for (int i = 0; i < warmup; ++i) fn();
  std::vector<double> ms;
  for (int i = 0; i < std::max(trials, 1); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  const std::size_t h = ms.size() / 2;
  return ms.size() % 2 ? ms[h] : 0.5 * (ms[h - 1] + ms[h]);
}

std::pair<int, int> default_endpoints(const TriMesh& mesh) {
  Vec2 lo = mesh.vertex(0), hi = mesh.vertex(0);
  for (const Vec2& p : mesh.vertices()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 centre = 0.5 * (lo + hi);
  const auto& interior = mesh.interior_vertices();
  if (interior.size() < 2) throw Error(ErrorCode::InvalidArgument, "mesh needs two interior vertices");
  int target = interior[0];
  for (int v : interior)
    if ((mesh.vertex(v) - centre).norm() < (mesh.vertex(target) - centre).norm()) target = v;
  int source = interior[0] == target ? interior[1] : interior[0];
  for (int v : interior)
    if ((mesh.vertex(v) - mesh.vertex(target)).norm() > (mesh.vertex(source) - mesh.vertex(target)).norm()) source = v;
  return {source, target};
}

BenchmarkReport run_benchmark(const TriMesh& mesh, const std::vector<MethodSpec>& methods, const BenchOptions& options) {
  BenchmarkReport rep;
  rep.domain = options.domain;
  rep.n = mesh.num_vertices();
  rep.k = mesh.num_boundary();
  rep.trials = options.trials;
  rep.warmup = options.warmup;
  auto [source, target] = default_endpoints(mesh);
  if (options.source >= 0) source = options.source;
  if (options.target >= 0) target = options.target;
  if (source < 0 || source >= rep.n || target < 0 || target >= rep.n) {
    throw Error(ErrorCode::InvalidTarget, "source or target out of range");
  }
  if (source == target) throw Error(ErrorCode::InvalidArgument, "source equals target");
  rep.source = source;
  rep.target = target;
  const int trials = options.trials, warmup = options.warmup;

  rep.assembly_ms = time_median_ms([&] { (void)assemble_cotan(mesh); }, trials, warmup);
  FieldEngine engine(mesh, options.engine);
  const LaplacianSet& ls = engine.laplacian();

  auto has_family = [&](const std::string& fam) {
    return std::any_of(rep.preproc_ms.begin(), rep.preproc_ms.end(), [&](const auto& e) { return e.first == fam; });
  };

  for (const MethodSpec& m : methods) {
    const std::string fam = to_string(m.family);
    if (!has_family(fam)) {
      double ms = 0.0;
      switch (m.family) {
        case Family::Dirichlet:
          ms = time_median_ms([&] { InteriorFactor f(ls.L_II()); }, trials, warmup);
          break;
        case Family::Neumann:
          ms = time_median_ms([&] { NeumannGreen g(ls, FieldEngine::neumann_ground(target)); }, trials, warmup);
          break;
        case Family::HeatDirichlet:
        case Family::HeatNeumann: {
          const auto bc = m.family == Family::HeatDirichlet ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann;
          ms = time_median_ms([&] { HeatSolver h(ls, *m.params.t, bc); }, trials, warmup);
          break;
        }
        case Family::Spectral: {
          const bool want_r = std::any_of(methods.begin(), methods.end(), [](const MethodSpec& x) { return x.kind == FieldKind::Resistance; });
          const bool want_b = std::any_of(methods.begin(), methods.end(), [](const MethodSpec& x) { return x.kind == FieldKind::Biharmonic; });
          ms = time_median_ms(
              [&] {
                SpectralDistances sd(ls, options.engine.dense_budget);
                if (want_r) (void)sd.resistance_gram();
                if (want_b) (void)sd.biharmonic_gram();
              },
              trials, warmup);
          break;
        }
        case Family::Divergence: {
          const double tau = options.engine.threshold.value_or(default_threshold(rep.n));
          ms = time_median_ms([&] { (void)sparsify(poisson_kernel(ls, LaplacianVariant::Cotan, options.engine.threads), tau); },
                              trials, warmup);
          const SparsityReport sr = sparsity_report(engine.sparse_kernel());
          rep.threshold = sr.threshold;
          rep.sparsity_percent = sr.percent;
          rep.max_dropped_mass = sr.max_dropped_mass;
          break;
        }
      }
      rep.preproc_ms.emplace_back(fam, ms);
    }

    MethodTiming mt;
    mt.method = m.name;
    mt.family = fam;
    const ScalarField field = engine.compute(m, target);
    const TracedPath path = triangle_descent(mesh, field, source);
    const std::vector<int> relevant = path_relevant_vertices(mesh, path);
    mt.path_vertices = static_cast<int>(relevant.size());
    mt.path_status = to_string(path.status);

    if (m.family == Family::Divergence) {
      const FDivergence f = builtin_f(m.name, m.params);
      const PoissonKernel& pk = engine.kernel();
      const PoissonKernel& spk = engine.sparse_kernel();
      const DivergenceOptions& dopt = options.engine.divergence;
      mt.online_full_ms = time_median_ms([&] { (void)dv_field(pk, f, target, dopt, options.engine.threads); }, trials, warmup);
      mt.online_full_sparse_ms = time_median_ms([&] { (void)dv_field_sparse(spk, f, target, dopt); }, trials, warmup);
      volatile double sink = 0.0;
      mt.online_path_ms = time_median_ms(
          [&] {
            double s = 0.0;
            for (int q : relevant) s += dv_pair_sparse(spk, f, target, q, dopt);
            sink = s;
          },
          trials, warmup);
      (void)sink;
      mt.path_only_applicable = true;
      if (m.kind == FieldKind::KL || rep.ops_dense_per_pair == 0) {
        OpCounter dense, sparse;
        long cnt = 0;
        for (int q : relevant) {
          if (q == target) continue;
          ++cnt;
          dv_pair(pk, f, target, q, dopt, &dense);
          dv_pair_sparse(spk, f, target, q, dopt, &sparse);
        }
        cnt = std::max(cnt, 1L);
        rep.ops_dense_per_pair = dense.ops / cnt;
        rep.ops_sparse_per_pair = static_cast<double>(sparse.ops) / static_cast<double>(cnt);
      }
    } else {
      mt.online_full_ms = time_median_ms([&] { (void)engine.compute(m, target); }, trials, warmup);
      mt.online_path_ms = mt.online_full_ms;
    }
    rep.methods.push_back(mt);
  }

  rep.machine = Json{{"hardware_threads", std::thread::hardware_concurrency()},
#ifdef __VERSION__
                     {"compiler", __VERSION__},
#endif
                     {"clock", "steady_clock"}};
  return rep;
}

Json to_json(const BenchmarkReport& r) {
  Json j;
  j["domain"] = r.domain;
  j["n"] = r.n;
  j["k"] = r.k;
  j["source"] = r.source;
  j["target"] = r.target;
  j["trials"] = r.trials;
  j["warmup"] = r.warmup;
  j["assembly_ms"] = r.assembly_ms;
  Json pre = Json::object();
  for (const auto& [fam, ms] : r.preproc_ms) pre[fam] = ms;
  j["preproc_ms"] = pre;
  Json ms = Json::array();
  for (const MethodTiming& m : r.methods) {
    ms.push_back(Json{{"method", m.method},
                      {"family", m.family},
                      {"online_full_ms", m.online_full_ms},
                      {"online_full_sparse_ms", m.path_only_applicable ? Json(m.online_full_sparse_ms) : Json(nullptr)},
                      {"online_path_ms", m.online_path_ms},
                      {"path_only_applicable", m.path_only_applicable},
                      {"path_vertices", m.path_vertices},
                      {"path_status", m.path_status}});
  }
  j["methods"] = ms;
  j["sparsity"] = Json{{"threshold", r.threshold}, {"percent", r.sparsity_percent}, {"max_dropped_mass", r.max_dropped_mass}};
  j["ops_per_pair"] = Json{{"dense", r.ops_dense_per_pair}, {"sparse", r.ops_sparse_per_pair}};
  j["machine"] = r.machine;
  return j;
}

std::vector<std::string> validate_benchmark_report(const Json& j) {
  std::vector<std::string> errs;
  auto need = [&](const Json& obj, const char* key, auto pred, const char* what, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      errs.push_back(where + key + ": missing");
      return false;
    }
    if (!pred(obj.at(key))) {
      errs.push_back(where + key + ": expected " + what);
      return false;
    }
    return true;
  };
  const auto is_str = [](const Json& v) { return v.is_string(); };
  const auto is_count = [](const Json& v) { return v.is_number_integer() && v.get<long>() >= 0; };
  const auto is_int = [](const Json& v) { return v.is_number_integer(); };
  const auto is_time = [](const Json& v) { return v.is_number() && v.get<double>() >= 0.0; };
  const auto is_bool = [](const Json& v) { return v.is_boolean(); };
  const auto is_obj = [](const Json& v) { return v.is_object(); };

  if (!j.is_object()) return {"report: expected an object"};
  need(j, "domain", is_str, "string", "");
  need(j, "n", is_count, "nonnegative integer", "");
  need(j, "k", is_count, "nonnegative integer", "");
  need(j, "source", is_int, "integer", "");
  need(j, "target", is_int, "integer", "");
  need(j, "trials", is_count, "nonnegative integer", "");
  need(j, "warmup", is_count, "nonnegative integer", "");
  need(j, "assembly_ms", is_time, "nonnegative number", "");
  if (need(j, "preproc_ms", is_obj, "object", "")) {
    for (const auto& [fam, v] : j.at("preproc_ms").items()) {
      if (!is_time(v)) errs.push_back("preproc_ms." + fam + ": expected nonnegative number");
    }
  }
  if (need(j, "methods", [](const Json& v) { return v.is_array(); }, "array", "")) {
    int i = 0;
    for (const Json& m : j.at("methods")) {
      const std::string w = "methods[" + std::to_string(i++) + "].";
      need(m, "method", is_str, "string", w);
      need(m, "family", is_str, "string", w);
      need(m, "online_full_ms", is_time, "nonnegative number", w);
      need(m, "online_full_sparse_ms", [&](const Json& v) { return v.is_null() || is_time(v); }, "null or nonnegative number", w);
      need(m, "online_path_ms", is_time, "nonnegative number", w);
      need(m, "path_only_applicable", is_bool, "boolean", w);
      need(m, "path_vertices", is_count, "nonnegative integer", w);
      need(m, "path_status", [](const Json& v) {
        return v.is_string() && (v == "reached" || v == "stuck" || v == "max-steps");
      }, "path status", w);
      if (m.is_object() && m.contains("family") && m.at("family").is_string() && j.contains("preproc_ms") &&
          j.at("preproc_ms").is_object() && !j.at("preproc_ms").contains(m.at("family").get<std::string>())) {
        errs.push_back(w + "family: no matching preproc_ms entry");
      }
    }
  }
  if (need(j, "sparsity", is_obj, "object", "")) {
    const Json& s = j.at("sparsity");
    need(s, "threshold", is_time, "nonnegative number", "sparsity.");
    need(s, "percent", [](const Json& v) { return v.is_number() && v.get<double>() >= 0.0 && v.get<double>() <= 100.0; },
         "number in [0, 100]", "sparsity.");
    need(s, "max_dropped_mass", is_time, "nonnegative number", "sparsity.");
  }
  if (need(j, "ops_per_pair", is_obj, "object", "")) {
    need(j.at("ops_per_pair"), "dense", is_count, "nonnegative integer", "ops_per_pair.");
    need(j.at("ops_per_pair"), "sparse", is_time, "nonnegative number", "ops_per_pair.");
  }
  need(j, "machine", is_obj, "object", "");
  return errs;
}

}  // namespace divpath
