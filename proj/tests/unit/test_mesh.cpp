#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numbers>

#include "divpath/domains.hpp"
#include "divpath/error.hpp"
#include "divpath/mesh.hpp"

using namespace divpath;
namespace fs = std::filesystem;

namespace {

TriMesh unit_square() { return TriMesh::build({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}); }

// Square split into four triangles around a centre vertex.
TriMesh fan_square() {
  return TriMesh::build({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}, {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "divpath_unit_mesh";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("square mesh connectivity") {
  const TriMesh m = unit_square();
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.edges().size() == 5);
  CHECK(m.num_boundary() == 4);
  CHECK(m.num_interior() == 0);
  CHECK(m.boundary_loops().size() == 1);
  const int diag = m.find_edge(0, 2);
  REQUIRE(diag >= 0);
  CHECK_FALSE(m.edges()[diag].is_boundary());
  CHECK(m.find_edge(1, 3) < 0);
  CHECK(m.total_area() == doctest::Approx(1.0));
}

TEST_CASE("fan mesh slots and areas") {
  const TriMesh m = fan_square();
  CHECK(m.num_interior() == 1);
  CHECK_FALSE(m.is_boundary(4));
  CHECK(m.interior_slot(4) == 0);
  CHECK(m.boundary_slot(4) == -1);
  for (int v = 0; v < 4; ++v) {
    CHECK(m.is_boundary(v));
    CHECK(m.boundary_vertices()[m.boundary_slot(v)] == v);
  }
  // barycentric areas: a third of each incident triangle
  CHECK(m.vertex_areas()[4] == doctest::Approx(1.0 / 3.0));
  CHECK(m.vertex_areas()[0] == doctest::Approx(1.0 / 6.0));
  CHECK(m.vertex_areas().sum() == doctest::Approx(m.total_area()));
  double boundary_mass = 0.0;
  for (double w : m.boundary_vertex_mass()) boundary_mass += w;
  CHECK(boundary_mass == doctest::Approx(4.0));
}

TEST_CASE("clockwise triangles are reoriented") {
  const TriMesh m = TriMesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(m.triangle_area(0) == doctest::Approx(0.5));
}

TEST_CASE("invalid meshes are rejected") {
  CHECK(code_of([] { TriMesh::build({{0, 0}, {1, 0}, {0, 1}}, {}); }) == ErrorCode::Degenerate);
  CHECK(code_of([] { TriMesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}); }) == ErrorCode::Parse);
  CHECK(code_of([] { TriMesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 1}}); }) == ErrorCode::Degenerate);
  CHECK(code_of([] { TriMesh::build({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}); }) == ErrorCode::Degenerate);
  CHECK(code_of([] { TriMesh::build({{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {{0, 1, 2}}); }) == ErrorCode::Disconnected);
  // three triangles on one edge
  CHECK(code_of([] {
          TriMesh::build({{0, 0}, {1, 0}, {0.5, 1}, {0.5, -1}, {0.5, 2}}, {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}});
        }) == ErrorCode::NonManifold);
  // bow tie: two triangles sharing only a vertex
  const ErrorCode bow = code_of([] { TriMesh::build({{0, 0}, {1, 0}, {1, 1}, {-1, 0}, {-1, -1}}, {{0, 1, 2}, {0, 3, 4}}); });
  CHECK((bow == ErrorCode::NonManifold || bow == ErrorCode::Disconnected));
}

TEST_CASE("off and triangle round trips") {
  const TriMesh m = make_test_mesh("convex-holes", 175);
  const fs::path off = scratch("holes.off");
  save_off(m, off);
  const TriMesh a = load_mesh(off);
  const fs::path stem = scratch("holes");
  save_triangle(m, stem);
  const TriMesh b = load_mesh(scratch("holes.node"));
  const TriMesh c = load_mesh(stem, MeshFormat::TriangleNodeEle);
  for (const TriMesh* r : {&a, &b, &c}) {
    REQUIRE(r->num_vertices() == m.num_vertices());
    REQUIRE(r->num_triangles() == m.num_triangles());
    for (int v = 0; v < m.num_vertices(); ++v) CHECK(r->vertex(v) == m.vertex(v));
    for (int t = 0; t < m.num_triangles(); ++t) CHECK(r->triangle(t) == m.triangle(t));
    CHECK(r->boundary_vertices() == m.boundary_vertices());
  }
}

TEST_CASE("triangle format with one-based indices and attributes") {
  const fs::path stem = scratch("onebased");
  {
    std::ofstream node(stem.string() + ".node");
    node << "# comment\n4 2 1 1\n1 0 0 7 1\n2 1 0 7 1\n3 1 1 7 1\n4 0 1 7 1\n";
    std::ofstream ele(stem.string() + ".ele");
    ele << "2 3 0\n1 1 2 3\n2 1 3 4\n";
  }
  const TriMesh m = load_mesh(stem.string() + ".ele");
  CHECK(m.num_vertices() == 4);
  CHECK(m.triangle(1) == Tri{0, 2, 3});
}

TEST_CASE("malformed and missing files") {
  CHECK(code_of([] { load_mesh(scratch("does_not_exist.off")); }) == ErrorCode::Io);
  const fs::path bad = scratch("bad.off");
  {
    std::ofstream f(bad);
    f << "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 2\n";
  }
  CHECK(code_of([&] { load_mesh(bad); }) == ErrorCode::Parse);
  const fs::path trunc = scratch("trunc.off");
  {
    std::ofstream f(trunc);
    f << "OFF\n3 1 0\n0 0 0\n1 0\n";
  }
  CHECK(code_of([&] { load_mesh(trunc); }) == ErrorCode::Parse);
  const fs::path lifted = scratch("lifted.off");
  {
    std::ofstream f(lifted);
    f << "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 1\n3 0 1 2\n";
  }
  CHECK(code_of([&] { load_mesh(lifted); }) == ErrorCode::Parse);
}

TEST_CASE("disk generator") {
  const TriMesh m = generate_disk_mesh(10);
  CHECK(m.vertex(0).norm() < 1e-15);
  CHECK(m.boundary_loops().size() == 1);
  for (int b : m.boundary_vertices()) CHECK(m.vertex(b).norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(check_delaunay(m).empty());
  // inscribed polygon area approaches pi
  CHECK(m.total_area() == doctest::Approx(std::numbers::pi).epsilon(0.01));
  CHECK(m.vertex_areas().sum() == doctest::Approx(m.total_area()));
}

TEST_CASE("test domains are Delaunay with the expected topology") {
  struct Case {
    const char* name;
    int res;
    std::size_t loops;
  };
  for (const Case c : {Case{"corridor", 1500, 1}, Case{"long-corridor", 3000, 1}, Case{"convex-holes", 175, 5},
                       Case{"concave", 1500, 1}}) {
    CAPTURE(c.name);
    const TriMesh m = make_test_mesh(c.name, c.res);
    CHECK(m.boundary_loops().size() == c.loops);
    CHECK(check_delaunay(m).empty());
    CHECK(std::abs(m.num_vertices() - c.res) < 0.25 * c.res);
  }
  CHECK_THROWS_AS(make_test_mesh("maze", 100), Error);
  CHECK_THROWS_AS(make_test_mesh("disk", 0), Error);
}

TEST_CASE("polygon containment") {
  const PolygonDomain d = convex_holes_domain();
  CHECK_FALSE(contains(d, {-100.0, -100.0}));
  const TriMesh m = mesh_polygon_domain(d, 0.1);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Tri& tri = m.triangle(t);
    CHECK(contains(d, (m.vertex(tri[0]) + m.vertex(tri[1]) + m.vertex(tri[2])) / 3.0));
  }
}

TEST_CASE("opposite cotangents of an equilateral pair") {
  const double h = std::sqrt(3.0) / 2.0;
  const TriMesh m = TriMesh::build({{0, 0}, {1, 0}, {0.5, h}, {0.5, -h}}, {{0, 1, 2}, {0, 3, 1}});
  const Edge& e = m.edges()[m.find_edge(0, 1)];
  CHECK(opposite_cotangent_sum(m, e) == doctest::Approx(2.0 / std::sqrt(3.0)));
}

namespace {

// Six equilateral unit triangles around the origin.
TriMesh hexagon_fan() {
  std::vector<Vec2> v = {{0, 0}};
  for (int i = 0; i < 6; ++i) v.emplace_back(std::cos(i * std::numbers::pi / 3), std::sin(i * std::numbers::pi / 3));
  std::vector<Tri> t;
  for (int i = 0; i < 6; ++i) t.push_back({0, 1 + i, 1 + (i + 1) % 6});
  return TriMesh::build(v, t);
}

}  // namespace

TEST_CASE("vertex areas of small meshes") {
  const TriMesh tri = TriMesh::build({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}, {{0, 1, 2}});
  CHECK(tri.num_boundary() == 3);
  CHECK(tri.num_interior() == 0);
  for (int v = 0; v < 3; ++v) CHECK(tri.vertex_areas()[v] == doctest::Approx(std::sqrt(3.0) / 12));
  CHECK(check_delaunay(tri).empty());
  const TriMesh fan = hexagon_fan();
  CHECK(fan.num_interior() == 1);
  CHECK(fan.vertex_areas()[0] == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(vertex_areas(fan).sum() == doctest::Approx(fan.total_area()));
}

TEST_CASE("non-Delaunay edges are reported") {
  // opposite angles of 100 degrees at both apexes
  const double h = 0.5 / std::tan(50.0 * std::numbers::pi / 180.0);
  const TriMesh m = TriMesh::build({{0, 0}, {1, 0}, {0.5, h}, {0.5, -h}}, {{0, 1, 2}, {0, 3, 1}});
  const auto bad = check_delaunay(m);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == m.find_edge(0, 1));
}

TEST_CASE("disk ring counts") {
  const TriMesh small = generate_disk_mesh(2);
  CHECK(small.num_vertices() == 19);
  CHECK_FALSE(small.is_boundary(0));
  const TriMesh m = generate_disk_mesh(40);
  CHECK(m.num_boundary() == 240);
  CHECK(check_delaunay(m).empty());
  for (int b : m.boundary_vertices()) CHECK(std::abs(m.vertex(b).norm() - 1.0) < 1e-12);
}
