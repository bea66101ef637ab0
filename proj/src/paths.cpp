#include "divpath/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divpath/error.hpp"

namespace divpath {

MeshLocation MeshLocation::on_edge(int a, int b, double t) {
  if (a > b) {
    std::swap(a, b);
    t = 1.0 - t;
  }
  return {Type::Edge, a, b, t, -1, Eigen::Vector3d::Zero()};
}

const char* to_string(PathStatus status) {
  switch (status) {
    case PathStatus::Reached:
      return "reached";
    case PathStatus::Stuck:
      return "stuck";
    case PathStatus::MaxSteps:
      return "max-steps";
  }
  return "?";
}

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

void check_source(const TriMesh& mesh, const ScalarField& field, int source) {
  if (field.values.size() != mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidArgument, "field size does not match the mesh");
  }
  if (source < 0 || source >= mesh.num_vertices() || field.target < 0 || field.target >= mesh.num_vertices()) {
    throw Error(ErrorCode::InvalidTarget, "source or target out of range");
  }
  if (source == field.target) throw Error(ErrorCode::InvalidArgument, "source equals target");
}

struct PathBuilder {
  const TriMesh& mesh;
  TracedPath path;

  void push(const Vec2& x, const MeshLocation& loc) {
    if (!path.points.empty()) path.length += (x - path.points.back()).norm();
    path.points.push_back(x);
    path.locations.push_back(loc);
  }
  void push_vertex(int v) { push(mesh.vertex(v), MeshLocation::at_vertex(v)); }
};

}  // namespace

TracedPath edge_descent(const TriMesh& mesh, const ScalarField& field, int source) {
  check_source(mesh, field, source);
  const Eigen::VectorXd& f = field.values;
  PathBuilder pb{mesh, {}};
  pb.path.source = source;
  pb.path.target = field.target;
  pb.push_vertex(source);
  int cur = source;
  const long cap = 50L * mesh.num_vertices();
  for (long step = 0;; ++step) {
    if (cur == field.target) {
      pb.path.status = PathStatus::Reached;
      break;
    }
    if (step >= cap) {
      pb.path.status = PathStatus::MaxSteps;
      break;
    }
    int best = -1;
    double best_drop = 0.0;
    for (int nb : mesh.neighbors(cur)) {
      const double drop = f[cur] - f[nb];
      if (drop > best_drop) {
        best_drop = drop;
        best = nb;
      }
    }
    if (best < 0) {
      pb.path.status = PathStatus::Stuck;
      pb.path.stuck_vertex = cur;
      break;
    }
    cur = best;
    pb.push_vertex(cur);
  }
  return pb.path;
}

Vec2 triangle_gradient(const TriMesh& mesh, const Eigen::VectorXd& values, int t) {
  const Tri& tri = mesh.triangle(t);
  const Vec2& p0 = mesh.vertex(tri[0]);
  const Vec2& p1 = mesh.vertex(tri[1]);
  const Vec2& p2 = mesh.vertex(tri[2]);
  const double twice_area = cross(p1 - p0, p2 - p0);
  if (twice_area == 0.0) throw Error(ErrorCode::Degenerate, "triangle_gradient: degenerate triangle");
  const Vec2 g = values[tri[0]] * perp(p2 - p1) + values[tri[1]] * perp(p0 - p2) + values[tri[2]] * perp(p1 - p0);
  return g / twice_area;
}

namespace {

// Gradient of barycentric coordinate k on triangle t.
Vec2 bary_gradient(const TriMesh& mesh, int t, int k) {
  const Tri& tri = mesh.triangle(t);
  const Vec2& a = mesh.vertex(tri[(k + 1) % 3]);
  const Vec2& b = mesh.vertex(tri[(k + 2) % 3]);
  const double twice_area = cross(mesh.vertex(tri[1]) - mesh.vertex(tri[0]), mesh.vertex(tri[2]) - mesh.vertex(tri[0]));
  return perp(b - a) / twice_area;
}

int corner_of(const Tri& tri, int v) {
  for (int k = 0; k < 3; ++k)
    if (tri[k] == v) return k;
  return -1;
}

constexpr double kSnap = 1e-12;
constexpr double kWedgeTol = 1e-10;

class TriangleTracer {
 public:
  TriangleTracer(const TriMesh& mesh, const ScalarField& field, int source)
      : mesh_(mesh), f_(field.values), target_(field.target), pb_{mesh, {}} {
    pb_.path.source = source;
    pb_.path.target = target_;
    min_progress_ = 1e-14 * mesh.bbox_diagonal();
  }

  TracedPath run(int source) {
    pb_.push_vertex(source);
    State s{source, -1, -1, 0.0, -1};
    const long cap = 50L * mesh_.num_vertices();
    for (long step = 0;; ++step) {
      if (s.vertex == target_) {
        pb_.path.status = PathStatus::Reached;
        break;
      }
      if (step >= cap) {
        pb_.path.status = PathStatus::MaxSteps;
        break;
      }
      const Vec2 before = pb_.path.points.back();
      const bool ok = s.vertex >= 0 ? from_vertex(s) : from_edge(s);
      if (!ok) break;
      if (s.vertex != target_ && (pb_.path.points.back() - before).norm() < min_progress_) {
        stuck(s.vertex >= 0 ? s.vertex : lower_end(s));
        break;
      }
    }
    return pb_.path;
  }

 private:
  // Either at a vertex, or on edge (a, b) at parameter t having come from
  // triangle `from`.
  struct State {
    int vertex;
    int a, b;
    double t;
    int from;
  };

  Vec2 edge_point(const State& s) const { return (1.0 - s.t) * mesh_.vertex(s.a) + s.t * mesh_.vertex(s.b); }
  double edge_value(const State& s) const { return (1.0 - s.t) * f_[s.a] + s.t * f_[s.b]; }
  int lower_end(const State& s) const { return f_[s.b] < f_[s.a] || (f_[s.b] == f_[s.a] && s.b < s.a) ? s.b : s.a; }

  void stuck(int v) {
    pb_.path.status = PathStatus::Stuck;
    pb_.path.stuck_vertex = v;
  }

  void go_vertex(State& s, int v) {
    pb_.push_vertex(v);
    s = {v, -1, -1, 0.0, -1};
  }

  // Lands on edge (a, b) at parameter t (from a), snapping to endpoints.
  void go_edge(State& s, int a, int b, double t, int from) {
    t = std::clamp(t, 0.0, 1.0);
    if (t <= kSnap) return go_vertex(s, a);
    if (t >= 1.0 - kSnap) return go_vertex(s, b);
    s = {-1, a, b, t, from};
    pb_.push(edge_point(s), MeshLocation::on_edge(a, b, t));
  }

  bool from_vertex(State& s) {
    const int v = s.vertex;
    if (mesh_.find_edge(v, target_) >= 0) {
      go_vertex(s, target_);
      return true;
    }
    int best_t = -1;
    double best_norm = 0.0;
    Vec2 best_d;
    for (int t : mesh_.incident_triangles(v)) {
      const Vec2 g = triangle_gradient(mesh_, f_, t);
      const double gn = g.norm();
      if (!(gn > 0.0)) continue;
      const Vec2 d = -g;
      const Tri& tri = mesh_.triangle(t);
      const int c = corner_of(tri, v);
      const Vec2 ea = mesh_.vertex(tri[(c + 1) % 3]) - mesh_.vertex(v);
      const Vec2 eb = mesh_.vertex(tri[(c + 2) % 3]) - mesh_.vertex(v);
      if (cross(ea, d) < -kWedgeTol * ea.norm() * gn) continue;
      if (cross(d, eb) < -kWedgeTol * eb.norm() * gn) continue;
      if (gn > best_norm) {
        best_norm = gn;
        best_t = t;
        best_d = d;
      }
    }
    if (best_t >= 0) {
      const Tri& tri = mesh_.triangle(best_t);
      const int c = corner_of(tri, v);
      const int a = tri[(c + 1) % 3], b = tri[(c + 2) % 3];
      const double rc = bary_gradient(mesh_, best_t, c).dot(best_d);
      if (rc < 0.0) {
        const double sa = std::max(0.0, bary_gradient(mesh_, best_t, (c + 1) % 3).dot(best_d));
        const double sb = std::max(0.0, bary_gradient(mesh_, best_t, (c + 2) % 3).dot(best_d));
        if (sa + sb > 0.0) {
          go_edge(s, a, b, sb / (sa + sb), best_t);
          return true;
        }
      }
    }
    // Steepest descending edge.
    int best_nb = -1;
    double best_slope = 0.0;
    for (int nb : mesh_.neighbors(v)) {
      const double slope = (f_[v] - f_[nb]) / (mesh_.vertex(nb) - mesh_.vertex(v)).norm();
      if (slope > best_slope) {
        best_slope = slope;
        best_nb = nb;
      }
    }
    if (best_nb < 0) {
      stuck(v);
      return false;
    }
    go_vertex(s, best_nb);
    return true;
  }

  bool from_edge(State& s) {
    if (s.a == target_ || s.b == target_) {
      go_vertex(s, target_);
      return true;
    }
    const Edge& e = mesh_.edges()[mesh_.find_edge(s.a, s.b)];
    const int next = e.t0 == s.from ? e.t1 : e.t0;
    if (next >= 0) {
      const Vec2 g = triangle_gradient(mesh_, f_, next);
      const Vec2 d = -g;
      const Tri& tri = mesh_.triangle(next);
      const int k0 = corner_of(tri, tri[0] != s.a && tri[0] != s.b ? tri[0] : (tri[1] != s.a && tri[1] != s.b ? tri[1] : tri[2]));
      const Vec2 n0 = bary_gradient(mesh_, next, k0);
      const double r0 = n0.dot(d);
      if (r0 > kWedgeTol * n0.norm() * d.norm()) {
        // Barycentrics of the entry point in `next`.
        double lam[3];
        lam[k0] = 0.0;
        lam[corner_of(tri, s.a)] = 1.0 - s.t;
        lam[corner_of(tri, s.b)] = s.t;
        double rate[3];
        for (int k = 0; k < 3; ++k) rate[k] = bary_gradient(mesh_, next, k).dot(d);
        int exit_k = -1;
        double best_s = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
          if (k == k0 || rate[k] >= 0.0) continue;
          const double sk = lam[k] / -rate[k];
          if (sk < best_s) {
            best_s = sk;
            exit_k = k;
          }
        }
        if (exit_k >= 0) {
          const int i = (exit_k + 1) % 3, j = (exit_k + 2) % 3;
          const double li = std::max(0.0, lam[i] + best_s * rate[i]);
          const double lj = std::max(0.0, lam[j] + best_s * rate[j]);
          if (li + lj > 0.0) {
            go_edge(s, tri[i], tri[j], lj / (li + lj), next);
            return true;
          }
        }
      }
    }
    // Valley or boundary: slide to the lower endpoint.
    const int low = lower_end(s);
    if (!(f_[low] < edge_value(s))) {
      stuck(low);
      return false;
    }
    go_vertex(s, low);
    return true;
  }

  const TriMesh& mesh_;
  const Eigen::VectorXd& f_;
  int target_;
  PathBuilder pb_;
  double min_progress_ = 0.0;
};

}  // namespace

TracedPath triangle_descent(const TriMesh& mesh, const ScalarField& field, int source) {
  check_source(mesh, field, source);
  return TriangleTracer(mesh, field, source).run(source);
}

std::vector<int> find_local_minima(const TriMesh& mesh, const ScalarField& field) {
  std::vector<int> out;
  const Eigen::VectorXd& f = field.values;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (v == field.target) continue;
    bool minimum = true;
    for (int nb : mesh.neighbors(v)) {
      if (!(f[v] < f[nb])) {
        minimum = false;
        break;
      }
    }
    if (minimum) out.push_back(v);
  }
  return out;
}

std::vector<Vec2> resample_polyline(const std::vector<Vec2>& line, double step) {
  std::vector<Vec2> out;
  if (line.empty()) return out;
  out.push_back(line.front());
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Vec2 a = line[i - 1], b = line[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / step)));
    for (int j = 1; j <= pieces; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / pieces));
  }
  return out;
}

namespace {

double point_polyline_distance(const Vec2& p, const std::vector<Vec2>& line) {
  if (line.size() == 1) return (p - line[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Vec2 ab = line[i] - line[i - 1];
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - line[i - 1]).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (line[i - 1] + t * ab)).norm());
  }
  return best;
}

}  // namespace

double polyline_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double step) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "path_hausdorff: empty path");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "path_hausdorff: step must be positive");
  double h = 0.0;
  for (const Vec2& p : resample_polyline(a, step)) h = std::max(h, point_polyline_distance(p, b));
  for (const Vec2& p : resample_polyline(b, step)) h = std::max(h, point_polyline_distance(p, a));
  return h;
}

double path_hausdorff(const TracedPath& a, const TracedPath& b, double step) {
  return polyline_hausdorff(a.points, b.points, step);
}

double path_hausdorff(const TracedPath& a, const TracedPath& b, const TriMesh& mesh) {
  return path_hausdorff(a, b, mesh.min_edge_length() / 4.0);
}

double mean_boundary_distance(const TriMesh& mesh, const TracedPath& path, double step) {
  const std::vector<Vec2> pts = resample_polyline(path.points, step);
  if (pts.empty()) return 0.0;
  double sum = 0.0;
  for (const Vec2& p : pts) {
    double best = std::numeric_limits<double>::infinity();
    for (int e : mesh.boundary_edges()) {
      const Vec2& a = mesh.vertex(mesh.edges()[e].v0);
      const Vec2& b = mesh.vertex(mesh.edges()[e].v1);
      const Vec2 ab = b - a;
      const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (p - (a + t * ab)).norm());
    }
    sum += best;
  }
  return sum / static_cast<double>(pts.size());
}

std::vector<int> path_relevant_vertices(const TriMesh& mesh, const TracedPath& path) {
  std::vector<int> out;
  auto add_triangles_of = [&](int v) {
    for (int t : mesh.incident_triangles(v))
      for (int w : mesh.triangle(t)) out.push_back(w);
  };
  for (const MeshLocation& loc : path.locations) {
    if (loc.type == MeshLocation::Type::Vertex) {
      add_triangles_of(loc.a);
    } else if (loc.type == MeshLocation::Type::Edge) {
      const Edge& e = mesh.edges()[mesh.find_edge(loc.a, loc.b)];
      for (int t : {e.t0, e.t1})
        if (t >= 0)
          for (int w : mesh.triangle(t)) out.push_back(w);
    } else if (loc.triangle >= 0) {
      for (int w : mesh.triangle(loc.triangle)) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace divpath
