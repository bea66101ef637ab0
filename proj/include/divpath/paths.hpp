#pragma once

#include <vector>

#include <Eigen/Core>

#include "divpath/fields.hpp"
#include "divpath/mesh.hpp"

namespace divpath {

struct MeshLocation {
  enum class Type { Vertex, Edge, Triangle };
  Type type = Type::Vertex;
  /// Vertex: a. Edge: a < b, point = (1 - t) * a + t * b.
  int a = -1;
  int b = -1;
  double t = 0.0;
  /// Triangle: index and barycentric coordinates.
  int triangle = -1;
  Eigen::Vector3d bary = Eigen::Vector3d::Zero();

  static MeshLocation at_vertex(int v) { return {Type::Vertex, v, -1, 0.0, -1, Eigen::Vector3d::Zero()}; }
  static MeshLocation on_edge(int a, int b, double t);
};

enum class PathStatus { Reached, Stuck, MaxSteps };
const char* to_string(PathStatus status);

struct TracedPath {
  std::vector<Vec2> points;
  std::vector<MeshLocation> locations;
  int source = -1;
  int target = -1;
  PathStatus status = PathStatus::Stuck;
  /// Vertex where a stuck path stopped.
  int stuck_vertex = -1;
  double length = 0.0;
};

/// Vertex-to-vertex walk to the neighbour with the largest drop; ties go to
/// the lowest vertex index.
TracedPath edge_descent(const TriMesh& mesh, const ScalarField& field, int source);

/// Gradient of the linear interpolant of `values` on triangle t.
Vec2 triangle_gradient(const TriMesh& mesh, const Eigen::VectorXd& values, int t);

/// Traces straight segments along the negative gradient through triangles.
/// At vertices the steepest incident triangle whose descent direction points
/// into it is followed, otherwise the steepest descending edge. On an edge
/// whose far triangle does not admit the descent direction (a valley or the
/// boundary) the path slides along the edge to its lower endpoint. Reaching
/// an edge incident on the target finishes along that edge.
TracedPath triangle_descent(const TriMesh& mesh, const ScalarField& field, int source);

/// Vertices other than the target whose value is strictly below all their
/// neighbours.
std::vector<int> find_local_minima(const TriMesh& mesh, const ScalarField& field);

/// Symmetric Hausdorff distance between the polylines, sampled at `step`.
double path_hausdorff(const TracedPath& a, const TracedPath& b, double step);
/// Same with step = mesh.min_edge_length() / 4.
double path_hausdorff(const TracedPath& a, const TracedPath& b, const TriMesh& mesh);
double polyline_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double step);

/// Points along the polyline at spacing at most `step`, endpoints included.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& line, double step);

/// Mean over resampled path points of the distance to the nearest boundary
/// edge.
double mean_boundary_distance(const TriMesh& mesh, const TracedPath& path, double step);

/// Vertices of every triangle the path passes through (or touches).
std::vector<int> path_relevant_vertices(const TriMesh& mesh, const TracedPath& path);

}  // namespace divpath
