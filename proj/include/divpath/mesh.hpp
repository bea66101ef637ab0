#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace divpath {

using Vec2 = Eigen::Vector2d;
using Tri = std::array<int, 3>;

/// Undirected edge with v0 < v1. t1 is -1 on boundary edges.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int t0 = -1;
  int t1 = -1;

  bool is_boundary() const { return t1 < 0; }
};

/// Planar triangulation with boundary classification and the per-vertex
/// quantities the Laplacian and path tracers consume.
///
/// Built once through TriMesh::build and immutable afterwards. Triangles are
/// stored counter-clockwise. Boundary vertices are ordered loop by loop:
/// loops are sorted by their smallest vertex index, and each loop starts at
/// that vertex and walks with the domain on its left. This order defines the
/// column order of the Poisson kernel.
class TriMesh {
 public:
  static TriMesh build(std::vector<Vec2> vertices, std::vector<Tri> triangles);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_boundary() const { return static_cast<int>(boundary_.size()); }
  int num_interior() const { return static_cast<int>(interior_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::vector<Tri>& triangles() const { return triangles_; }
  const Tri& triangle(int t) const { return triangles_[t]; }

  /// Ordered boundary vertex set B (see class comment for the order).
  const std::vector<int>& boundary_vertices() const { return boundary_; }
  /// Interior vertex set I in ascending index order.
  const std::vector<int>& interior_vertices() const { return interior_; }
  const std::vector<std::vector<int>>& boundary_loops() const { return loops_; }

  bool is_boundary(int v) const { return slot_[v] < 0; }
  /// Position of v within B, or -1 for interior vertices.
  int boundary_slot(int v) const { return slot_[v] < 0 ? -slot_[v] - 1 : -1; }
  /// Position of v within I, or -1 for boundary vertices.
  int interior_slot(int v) const { return slot_[v] >= 0 ? slot_[v] : -1; }

  const std::vector<Edge>& edges() const { return edges_; }
  /// Index into edges() of the edge {a, b}, or -1.
  int find_edge(int a, int b) const;
  /// Triangle across the edge opposite corner k of t, or -1 on the boundary.
  int triangle_neighbor(int t, int k) const { return tri_neighbors_[t][k]; }

  /// Sorted edge neighbours of v.
  std::span<const int> neighbors(int v) const {
    return {adjacency_.data() + adjacency_offsets_[v],
            adjacency_.data() + adjacency_offsets_[v + 1]};
  }
  /// Triangles incident on v, ascending.
  std::span<const int> incident_triangles(int v) const {
    return {incidence_.data() + incidence_offsets_[v],
            incidence_.data() + incidence_offsets_[v + 1]};
  }

  /// One-third rule vertex areas.
  const Eigen::VectorXd& vertex_areas() const { return areas_; }
  double triangle_area(int t) const;
  double total_area() const { return total_area_; }

  /// Indices into edges() of every boundary edge, and their lengths.
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }
  const std::vector<double>& boundary_edge_lengths() const { return boundary_edge_lengths_; }
  /// Half the summed length of the boundary edges at each boundary vertex,
  /// indexed by boundary slot.
  const std::vector<double>& boundary_vertex_mass() const { return boundary_mass_; }

  double mean_edge_length() const { return mean_edge_length_; }
  double min_edge_length() const { return min_edge_length_; }
  double bbox_diagonal() const { return bbox_diagonal_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Tri> triangles_;
  std::vector<int> boundary_;
  std::vector<int> interior_;
  std::vector<std::vector<int>> loops_;
  std::vector<int> slot_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  std::vector<std::array<int, 3>> tri_neighbors_;
  std::vector<int> adjacency_offsets_, adjacency_;
  std::vector<int> incidence_offsets_, incidence_;
  Eigen::VectorXd areas_;
  double total_area_ = 0.0;
  std::vector<int> boundary_edges_;
  std::vector<double> boundary_edge_lengths_;
  std::vector<double> boundary_mass_;
  double mean_edge_length_ = 0.0;
  double min_edge_length_ = 0.0;
  double bbox_diagonal_ = 0.0;
};

enum class MeshFormat { TriangleNodeEle, Off };

/// Reads a Triangle .node/.ele pair or an OFF file. For the Triangle format,
/// `path` may name either file or their common stem.
TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
/// Picks the format from the extension (.off, otherwise Triangle).
TriMesh load_mesh(const std::filesystem::path& path);

void save_off(const TriMesh& mesh, const std::filesystem::path& path);
/// Writes stem.node and stem.ele with 0-based indices.
void save_triangle(const TriMesh& mesh, const std::filesystem::path& stem);

/// One-third incident-triangle areas; identical to mesh.vertex_areas().
Eigen::VectorXd vertex_areas(const TriMesh& mesh);

/// Sum of the two cotangents opposite an interior edge.
double opposite_cotangent_sum(const TriMesh& mesh, const Edge& edge);

/// Interior edges whose opposite cotangents sum below zero (up to a 1e-12
/// relative round-off allowance), as edge indices.
std::vector<int> check_delaunay(const TriMesh& mesh);

}  // namespace divpath
