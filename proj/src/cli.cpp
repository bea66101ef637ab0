#include "divpath/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "divpath/bench.hpp"
#include "divpath/domains.hpp"
#include "divpath/error.hpp"
#include "divpath/io.hpp"
#include "divpath/methods.hpp"
#include "divpath/paths.hpp"
#include "divpath/render.hpp"

namespace divpath {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::optional<double> t, alpha, threshold, floor;
  std::optional<int> power;
  std::string mode = "triangle";
  int trials = 11;
  int warmup = 3;
  int budget = kDefaultDenseBudget;
  int levels = 10;
  bool sparse = false;
  bool weight_by_target = false;
  bool no_clamp = false;
  int threads = 0;

  FieldParams params() const { return {t, alpha, power}; }
  EngineOptions engine() const {
    EngineOptions e;
    e.dense_budget = budget;
    e.threshold = threshold;
    e.sparse = sparse;
    e.divergence.weight_by_target = weight_by_target;
    e.divergence.clamp = !no_clamp;
    if (floor) e.divergence.floor = *floor;
    e.threads = threads;
    return e;
  }
};

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Parse:
    case ErrorCode::Io:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidTarget:
    case ErrorCode::NonManifold:
    case ErrorCode::Disconnected:
      return kExitUsage;
    default:
      return kExitSolver;
  }
}

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

TracedPath trace(const TriMesh& mesh, const ScalarField& field, int source, const std::string& mode) {
  if (mode == "edge") return edge_descent(mesh, field, source);
  return triangle_descent(mesh, field, source);
}

int status_exit(PathStatus s) {
  switch (s) {
    case PathStatus::Reached:
      return kExitOk;
    case PathStatus::Stuck:
      return kExitStuck;
    case PathStatus::MaxSteps:
      return kExitMaxSteps;
  }
  return kExitSolver;
}

void check_vertex(const TriMesh& mesh, int v, const char* what) {
  if (v < 0 || v >= mesh.num_vertices()) {
    throw UsageError(std::string(what) + " " + std::to_string(v) + " out of range [0, " +
                     std::to_string(mesh.num_vertices()) + ")");
  }
}

std::vector<int> default_audit_targets(const TriMesh& mesh, int count, unsigned seed) {
  std::vector<int> pool = mesh.interior_vertices();
  std::mt19937 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min<std::size_t>(pool.size(), count));
  return pool;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distance fields and gradient-descent paths on planar triangle meshes"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--t", g.t, "Heat time step (heat methods)");
  app.add_option("--alpha", g.alpha, "Alpha parameter of the alpha divergence");
  app.add_option("--power", g.power, "Exponent p of the |1-x|^p divergence");
  app.add_option("--mode", g.mode, "Path tracing mode")->check(CLI::IsMember({"edge", "triangle"}));
  app.add_option("--threshold", g.threshold, "Sparsification threshold (default 1/sqrt(n))");
  app.add_option("--trials", g.trials, "Benchmark trials")->check(CLI::PositiveNumber);
  app.add_option("--warmup", g.warmup, "Benchmark warm-up runs")->check(CLI::NonNegativeNumber);
  app.add_option("--budget", g.budget, "Largest n for dense pseudo-inverse methods");
  app.add_option("--levels", g.levels, "Contour levels in SVG output")->check(CLI::NonNegativeNumber);
  app.add_option("--floor", g.floor, "Clamp floor for zero kernel entries");
  app.add_option("--threads", g.threads, "Worker threads (0: hardware)");
  app.add_flag("--sparse", g.sparse, "Evaluate divergences on the sparsified kernel");
  app.add_flag("--weight-by-target", g.weight_by_target, "Weight divergence sums by the target row");
  app.add_flag("--no-clamp", g.no_clamp, "Fail instead of clamping zero kernel entries");

  std::string mesh_path, out_path, method, domain_name, field_file;
  std::vector<std::string> methods, path_files;
  std::vector<int> targets;
  int target = -1, source = -1, resolution = 0;

  auto* field = app.add_subcommand("field", "Compute a distance field");
  field->add_option("mesh", mesh_path, "Mesh file (.off, .node/.ele)")->required();
  field->add_option("--method", method, "Method name")->required();
  field->add_option("--target", target, "Target vertex")->required();
  field->add_option("--out", out_path, "Output stem: writes STEM.csv and STEM.json")->required();

  auto* path = app.add_subcommand("path", "Trace a descent path");
  path->add_option("mesh", mesh_path, "Mesh file")->required();
  path->add_option("--method", method, "Method name")->required();
  path->add_option("--source", source, "Source vertex")->required();
  path->add_option("--target", target, "Target vertex")->required();
  path->add_option("--out", out_path, "Output stem: writes STEM.csv and STEM.json")->required();

  auto* compare = app.add_subcommand("compare", "Trace several methods and compare their paths");
  compare->add_option("mesh", mesh_path, "Mesh file")->required();
  compare->add_option("--method", methods, "Comma-separated methods")->required()->delimiter(',');
  compare->add_option("--source", source, "Source vertex")->required();
  compare->add_option("--target", target, "Target vertex")->required();
  compare->add_option("--out", out_path, "Report JSON");

  auto* bench = app.add_subcommand("bench", "Time preprocessing and online phases");
  bench->add_option("mesh", mesh_path, "Mesh file")->required();
  bench->add_option("--method", methods, "Comma-separated methods")->delimiter(',');
  bench->add_option("--source", source, "Source vertex (default: far from target)");
  bench->add_option("--target", target, "Target vertex (default: near the centre)");
  bench->add_option("--domain", domain_name, "Domain label for the report");
  bench->add_option("--out", out_path, "Report JSON");

  auto* audit = app.add_subcommand("audit", "List spurious local minima");
  audit->add_option("mesh", mesh_path, "Mesh file")->required();
  audit->add_option("--method", methods, "Comma-separated methods")->required()->delimiter(',');
  audit->add_option("--target", targets, "Target vertices (default: 5 random interior vertices)")->delimiter(',');
  audit->add_option("--out", out_path, "Report JSON");

  auto* render = app.add_subcommand("render", "Draw a field, contours and paths as SVG");
  render->add_option("mesh", mesh_path, "Mesh file")->required();
  render->add_option("--field", field_file, "Field CSV");
  render->add_option("--path", path_files, "Path CSV files");
  render->add_option("--source", source, "Vertex marked as source");
  render->add_option("--target", target, "Vertex marked as target");
  render->add_option("--out", out_path, "SVG file")->required();

  auto* gen = app.add_subcommand("gen", "Write a built-in test mesh");
  gen->add_option("--domain", domain_name, "disk, corridor, long-corridor, convex-holes, concave")->required();
  gen->add_option("--resolution", resolution, "Rings for disk, approximate vertex count otherwise")->required();
  gen->add_option("--out", out_path, "Mesh file (.off) or Triangle stem")->required();

  std::vector<const char*> argv{"divpath"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const TriMesh mesh = make_test_mesh(domain_name, resolution);
      const fs::path p(out_path);
      if (p.extension() == ".off") {
        save_off(mesh, p);
      } else {
        save_triangle(mesh, p);
      }
      out << "wrote " << domain_name << " mesh: n=" << mesh.num_vertices() << " k=" << mesh.num_boundary() << "\n";
      return kExitOk;
    }

    const TriMesh mesh = load_mesh(mesh_path);
    FieldEngine engine(mesh, g.engine());
    const FieldParams params = g.params();

    if (field->parsed()) {
      check_vertex(mesh, target, "target");
      const MethodSpec m = parse_method(method, params);
      const ScalarField f = engine.compute(m, target);
      write_field_csv(f, out_path + ".csv");
      Json meta = field_metadata(f);
      meta["method"] = m.name;
      if (m.family == Family::Neumann) meta["ground"] = FieldEngine::neumann_ground(target);
      if (m.family == Family::Divergence) meta["sparse"] = g.sparse;
      write_json(meta, out_path + ".json");
      out << m.name << " field, target " << target << ": min " << f.values.minCoeff() << " max "
          << f.values.maxCoeff() << (f.precision_warning ? " (precision warning)" : "") << "\n";
      return kExitOk;
    }

    if (path->parsed()) {
      check_vertex(mesh, source, "source");
      check_vertex(mesh, target, "target");
      if (source == target) throw UsageError("source and target must differ");
      const MethodSpec m = parse_method(method, params);
      const ScalarField f = engine.compute(m, target);
      const TracedPath p = trace(mesh, f, source, g.mode);
      write_path_csv(p, out_path + ".csv");
      Json j = path_to_json(p);
      j["method"] = m.name;
      j["mode"] = g.mode;
      write_json(j, out_path + ".json");
      out << m.name << " path " << source << " -> " << target << ": " << to_string(p.status) << ", "
          << p.points.size() << " points, length " << p.length << "\n";
      return status_exit(p.status);
    }

    if (compare->parsed()) {
      check_vertex(mesh, source, "source");
      check_vertex(mesh, target, "target");
      if (source == target) throw UsageError("source and target must differ");
      std::vector<TracedPath> traced;
      Json rows = Json::array();
      const double step = mesh.min_edge_length() / 4.0;
      for (const std::string& name : methods) {
        const MethodSpec m = parse_method(name, params);
        const ScalarField f = engine.compute(m, target);
        traced.push_back(trace(mesh, f, source, g.mode));
        const TracedPath& p = traced.back();
        rows.push_back(Json{{"method", m.name},
                            {"status", to_string(p.status)},
                            {"length", p.length},
                            {"points", p.points.size()},
                            {"minima", find_local_minima(mesh, f).size()},
                            {"mean_boundary_distance", mean_boundary_distance(mesh, p, step)}});
      }
      Json matrix = Json::array();
      double worst = 0.0;
      for (std::size_t i = 0; i < traced.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < traced.size(); ++j) {
          const double h = i == j ? 0.0 : path_hausdorff(traced[i], traced[j], step);
          worst = std::max(worst, h);
          row.push_back(h);
        }
        matrix.push_back(row);
      }
      Json rep{{"source", source},
               {"target", target},
               {"mode", g.mode},
               {"mean_edge_length", mesh.mean_edge_length()},
               {"methods", rows},
               {"hausdorff", matrix},
               {"max_hausdorff", worst},
               {"max_hausdorff_edges", worst / mesh.mean_edge_length()}};
      if (!out_path.empty()) write_json(rep, out_path);
      out << rep.dump(2) << "\n";
      return kExitOk;
    }

    if (bench->parsed()) {
      if (methods.empty()) methods = {"D", "N", "kl", "tv"};
      std::vector<MethodSpec> specs;
      for (const auto& name : methods) specs.push_back(parse_method(name, params));
      BenchOptions bo;
      bo.domain = domain_name.empty() ? fs::path(mesh_path).stem().string() : domain_name;
      bo.trials = g.trials;
      bo.warmup = g.warmup;
      bo.source = source;
      bo.target = target;
      bo.engine = g.engine();
      const Json rep = to_json(run_benchmark(mesh, specs, bo));
      const auto problems = validate_benchmark_report(rep);
      for (const auto& p : problems) err << "report schema: " << p << "\n";
      if (!out_path.empty()) write_json(rep, out_path);
      out << rep.dump(2) << "\n";
      return problems.empty() ? kExitOk : kExitSolver;
    }

    if (audit->parsed()) {
      if (targets.empty()) targets = default_audit_targets(mesh, 5, 1);
      for (int t : targets) check_vertex(mesh, t, "target");
      Json rows = Json::array();
      for (const auto& name : methods) {
        const MethodSpec m = parse_method(name, params);
        Json per = Json::array();
        std::size_t total = 0;
        for (int t : targets) {
          const ScalarField f = engine.compute(m, t);
          const auto minima = find_local_minima(mesh, f);
          total += minima.size();
          per.push_back(Json{{"target", t}, {"count", minima.size()}, {"minima", minima}});
        }
        rows.push_back(Json{{"method", m.name}, {"total", total}, {"targets", per}});
      }
      Json rep{{"n", mesh.num_vertices()}, {"k", mesh.num_boundary()}, {"methods", rows}};
      if (!out_path.empty()) write_json(rep, out_path);
      out << rep.dump(2) << "\n";
      return kExitOk;
    }

    if (render->parsed()) {
      std::optional<Eigen::VectorXd> values;
      if (!field_file.empty()) {
        values = read_field_csv(field_file);
        if (values->size() != mesh.num_vertices()) throw UsageError("field has a different vertex count than the mesh");
      }
      std::vector<RenderPath> paths;
      static const char* palette[] = {"#ff3030", "#30a0ff", "#ffa020", "#ff40ff", "#40ffff", "#ffffff"};
      for (std::size_t i = 0; i < path_files.size(); ++i) paths.push_back({read_path_csv(path_files[i]), palette[i % 6]});
      RenderOptions ro;
      ro.levels = g.levels;
      if (source >= 0) {
        check_vertex(mesh, source, "source");
        ro.source = mesh.vertex(source);
      }
      if (target >= 0) {
        check_vertex(mesh, target, "target");
        ro.target = mesh.vertex(target);
      }
      write_svg(render_svg(mesh, values, paths, ro), out_path);
      out << "wrote " << out_path << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}

}  // namespace divpath
