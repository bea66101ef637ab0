#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "divpath/domains.hpp"
#include "divpath/divergence.hpp"
#include "divpath/error.hpp"
#include "divpath/io.hpp"
#include "divpath/render.hpp"
#include "divpath/solvers.hpp"

using namespace divpath;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "divpath_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("field csv round trip is exact") {
  const TriMesh m = generate_disk_mesh(6);
  const LaplacianSet ls = assemble_cotan(m);
  const ScalarField f = green_dirichlet(ls, 3);
  const fs::path p = scratch("field.csv");
  write_field_csv(f, p);
  CHECK(slurp(p).rfind("vertex,value\n", 0) == 0);
  const Eigen::VectorXd back = read_field_csv(p);
  REQUIRE(back.size() == f.values.size());
  CHECK((back - f.values).cwiseAbs().maxCoeff() == 0.0);

  const Json meta = field_metadata(f);
  CHECK(meta["kind"] == "dirichlet-green");
  CHECK(meta["target"] == 3);
  CHECK(meta["n"] == m.num_vertices());
  CHECK(meta["precision_warning"] == false);
  write_field_json(f, scratch("field.json"));
  CHECK(Json::parse(slurp(scratch("field.json")))["min"].get<double>() == f.values.minCoeff());
}

TEST_CASE("field csv validation") {
  const fs::path p = scratch("shuffled.csv");
  {
    std::ofstream o(p);
    o << "vertex,value\n2,0.5\n0,1.5\n1,-2\n";
  }
  const Eigen::VectorXd v = read_field_csv(p);
  CHECK(v[0] == 1.5);
  CHECK(v[1] == -2.0);
  CHECK(v[2] == 0.5);
  for (const std::string body : {"vertex,value\n0,1\n0,2\n", "vertex,value\n0,1\n2,2\n", "vertex,value\n0,abc\n",
                           "id,val\n0,1\n", "vertex,value\n"}) {
    CAPTURE(body);
    {
      std::ofstream o(p);
      o << body;
    }
    try {
      read_field_csv(p);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
    }
  }
}

TEST_CASE("path csv and json") {
  TracedPath path;
  path.points = {{0.0, 0.0}, {0.25, 0.5}, {1.0, 1.0}};
  path.locations = {MeshLocation::at_vertex(0), MeshLocation::on_edge(1, 2, 0.5), MeshLocation::at_vertex(3)};
  path.source = 0;
  path.target = 3;
  path.status = PathStatus::Reached;
  path.length = 1.5;
  const fs::path p = scratch("path.csv");
  write_path_csv(path, p);
  CHECK(slurp(p).rfind("x,y\n", 0) == 0);
  const auto back = read_path_csv(p);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == path.points[i]);
  const Json j = path_to_json(path);
  CHECK(j["status"] == "reached");
  CHECK(j["stuck_vertex"].is_null());
  CHECK(j["points"].size() == 3);
  CHECK(j["points"][1]["x"] == 0.25);
}

TEST_CASE("contour levels and segments") {
  const TriMesh m = TriMesh::build({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
  Eigen::VectorXd f(4);
  f << 0.0, 1.0, 2.0, 1.0;  // f = x + y
  const auto levels = contour_levels(f, 3);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0] == doctest::Approx(0.5));
  CHECK(levels[1] == doctest::Approx(1.0));
  CHECK(levels[2] == doctest::Approx(1.5));
  CHECK(contour_levels(Eigen::VectorXd::Constant(4, 2.0), 5).empty());
  const auto contours = extract_contours(m, f, {0.5, 1.25, 3.0});
  REQUIRE(contours.size() == 3);
  CHECK(contours[0].segments.size() == 2);
  for (const auto& s : contours[0].segments) {
    for (const Vec2& q : {s.a, s.b}) CHECK(q.x() + q.y() == doctest::Approx(0.5));
  }
  CHECK(contours[1].segments.size() == 2);
  CHECK(contours[2].segments.empty());
  const TriMesh one = TriMesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  CHECK(extract_contours(one, Eigen::Vector3d(0.0, 1.0, 1.0), {0.5})[0].segments.size() == 1);
}

TEST_CASE("svg output") {
  const TriMesh m = generate_disk_mesh(5);
  Eigen::VectorXd f(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) f[v] = m.vertex(v).x();
  RenderOptions opt;
  opt.levels = 4;
  opt.source = Vec2(0.5, 0.0);
  opt.target = Vec2(-0.5, 0.0);
  const std::string svg = render_svg(m, f, {{{{0.5, 0.0}, {-0.5, 0.0}}, "#ff0000"}}, opt);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  const std::string wire = render_svg(m, std::nullopt, {});
  CHECK(wire.find("<svg") != std::string::npos);
  write_svg(svg, scratch("f.svg"));
  CHECK(fs::file_size(scratch("f.svg")) == svg.size());
  CHECK_THROWS_AS(render_svg(m, Eigen::VectorXd::Zero(3), {}), Error);
}

TEST_CASE("constant and linear fields") {
  const TriMesh m = generate_disk_mesh(8);
  const std::string flat = render_svg(m, Eigen::VectorXd::Constant(m.num_vertices(), 3.0), {});
  CHECK(flat.find("data-level") == std::string::npos);
  std::set<std::string> fills;
  for (std::size_t at = flat.find("<polygon"); at != std::string::npos; at = flat.find("<polygon", at + 1)) {
    const std::size_t f = flat.find("fill=\"", at) + 6;
    fills.insert(flat.substr(f, flat.find('"', f) - f));
  }
  CHECK(fills.size() == 1);

  // f = 2x + y: every contour segment lies on its level line
  Eigen::VectorXd f(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) f[v] = 2 * m.vertex(v).x() + m.vertex(v).y();
  for (const ContourLevel& cl : extract_contours(m, f, contour_levels(f, 7))) {
    REQUIRE_FALSE(cl.segments.empty());
    for (const auto& s : cl.segments) {
      CHECK(2 * s.a.x() + s.a.y() == doctest::Approx(cl.value));
      CHECK(2 * s.b.x() + s.b.y() == doctest::Approx(cl.value));
    }
  }
}

TEST_CASE("KL contours around the disk centre are circles") {
  const TriMesh m = generate_disk_mesh(40);
  const PoissonKernel pk = poisson_kernel(assemble_cotan(m));
  const ScalarField kl = dv_field(pk, builtin_f("kl"), 0);
  const double h = m.mean_edge_length();
  for (const ContourLevel& cl : extract_contours(m, kl.values, contour_levels(kl.values, 10))) {
    REQUIRE(cl.segments.size() > 10);
    // algebraic circle fit x^2 + y^2 + D x + E y + F = 0
    Eigen::MatrixXd A(2 * cl.segments.size(), 3);
    Eigen::VectorXd b(A.rows());
    int i = 0;
    for (const auto& s : cl.segments) {
      for (const Vec2& q : {s.a, s.b}) {
        A.row(i) << q.x(), q.y(), 1.0;
        b[i++] = -q.squaredNorm();
      }
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    const Vec2 centre(-c[0] / 2, -c[1] / 2);
    const double radius = std::sqrt(centre.squaredNorm() - c[2]);
    CAPTURE(cl.value);
    CHECK(centre.norm() < 0.1 * h);
    for (const auto& s : cl.segments) CHECK(std::abs((s.a - centre).norm() - radius) < 0.1 * h);
  }
}
