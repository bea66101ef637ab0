#include "divpath/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "divpath/error.hpp"
#include "io_util.hpp"

namespace divpath {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

std::string describe_triangle(int t, const Tri& tri) {
  std::ostringstream os;
  os << "triangle " << t << " (" << tri[0] << ", " << tri[1] << ", " << tri[2] << ")";
  return os.str();
}

}  // namespace

TriMesh TriMesh::build(std::vector<Vec2> vertices, std::vector<Tri> triangles) {
  const int n = static_cast<int>(vertices.size());
  if (triangles.empty()) throw Error(ErrorCode::Degenerate, "mesh has no triangles");

  TriMesh mesh;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    Tri& tri = triangles[t];
    for (int v : tri) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::Parse, describe_triangle(static_cast<int>(t), tri) +
                                          " references a vertex out of range");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorCode::Degenerate, describe_triangle(static_cast<int>(t), tri) +
                                             " repeats a vertex");
    }
    const double area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    if (!(std::abs(area) > 0.0) || !std::isfinite(area)) {
      throw Error(ErrorCode::Degenerate,
                  describe_triangle(static_cast<int>(t), tri) + " has zero area");
    }
    if (area < 0.0) std::swap(tri[1], tri[2]);
  }

  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  const int nt = mesh.num_triangles();

  // Edges and triangle adjacency.
  mesh.tri_neighbors_.assign(nt, {-1, -1, -1});
  std::vector<std::array<int, 2>> edge_corner;  // (triangle, corner) of t0
  for (int t = 0; t < nt; ++t) {
    const Tri& tri = mesh.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      auto [it, inserted] = mesh.edge_lookup_.try_emplace(edge_key(a, b),
                                                          static_cast<int>(mesh.edges_.size()));
      if (inserted) {
        mesh.edges_.push_back({std::min(a, b), std::max(a, b), t, -1});
        edge_corner.push_back({t, k});
        continue;
      }
      Edge& e = mesh.edges_[it->second];
      if (e.t1 >= 0) {
        std::ostringstream os;
        os << "edge (" << e.v0 << ", " << e.v1 << ") has more than two incident triangles";
        throw Error(ErrorCode::NonManifold, os.str());
      }
      e.t1 = t;
      const auto [t0, k0] = edge_corner[it->second];
      mesh.tri_neighbors_[t0][k0] = t;
      mesh.tri_neighbors_[t][k] = t0;
    }
  }

  // Every vertex must be used and the triangles must form one edge-connected piece.
  {
    std::vector<char> used(n, 0);
    for (const Tri& tri : mesh.triangles_)
      for (int v : tri) used[v] = 1;
    for (int v = 0; v < n; ++v) {
      if (!used[v]) {
        throw Error(ErrorCode::Disconnected,
                    "vertex " + std::to_string(v) + " is not referenced by any triangle");
      }
    }
    std::vector<char> seen(nt, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int nb : mesh.tri_neighbors_[t]) {
        if (nb >= 0 && !seen[nb]) {
          seen[nb] = 1;
          ++reached;
          stack.push_back(nb);
        }
      }
    }
    if (reached != nt) {
      throw Error(ErrorCode::Disconnected, "mesh is not edge-connected (" +
                                               std::to_string(reached) + " of " +
                                               std::to_string(nt) + " triangles reachable)");
    }
  }

  // Boundary loops: a boundary edge a->b is oriented with its triangle on the left.
  std::vector<int> next(n, -1);
  for (int t = 0; t < nt; ++t) {
    const Tri& tri = mesh.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (mesh.tri_neighbors_[t][k] >= 0) continue;
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      if (next[a] >= 0) {
        throw Error(ErrorCode::NonManifold,
                    "vertex " + std::to_string(a) + " joins more than one boundary fan");
      }
      next[a] = b;
    }
  }
  std::vector<char> on_loop(n, 0);
  for (int v = 0; v < n; ++v) {
    if (next[v] < 0 || on_loop[v]) continue;
    std::vector<int> loop;
    int cur = v;
    while (!on_loop[cur]) {
      on_loop[cur] = 1;
      loop.push_back(cur);
      cur = next[cur];
    }
    if (cur != v) throw Error(ErrorCode::NonManifold, "boundary does not close into loops");
    mesh.loops_.push_back(std::move(loop));
  }

  mesh.slot_.assign(n, 0);
  for (const auto& loop : mesh.loops_) {
    for (int v : loop) {
      mesh.slot_[v] = -static_cast<int>(mesh.boundary_.size()) - 1;
      mesh.boundary_.push_back(v);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (next[v] < 0) {
      mesh.slot_[v] = static_cast<int>(mesh.interior_.size());
      mesh.interior_.push_back(v);
    }
  }

  // Areas.
  mesh.areas_ = Eigen::VectorXd::Zero(n);
  mesh.total_area_ = 0.0;
  for (int t = 0; t < nt; ++t) {
    const double a = mesh.triangle_area(t);
    mesh.total_area_ += a;
    for (int v : mesh.triangles_[t]) mesh.areas_[v] += a / 3.0;
  }

  // Adjacency and incidence in CSR form.
  std::vector<std::vector<int>> adj(n), inc(n);
  for (const Edge& e : mesh.edges_) {
    adj[e.v0].push_back(e.v1);
    adj[e.v1].push_back(e.v0);
  }
  for (int t = 0; t < nt; ++t)
    for (int v : mesh.triangles_[t]) inc[v].push_back(t);
  mesh.adjacency_offsets_.assign(n + 1, 0);
  mesh.incidence_offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end());
    mesh.adjacency_offsets_[v + 1] = mesh.adjacency_offsets_[v] + static_cast<int>(adj[v].size());
    mesh.incidence_offsets_[v + 1] = mesh.incidence_offsets_[v] + static_cast<int>(inc[v].size());
    mesh.adjacency_.insert(mesh.adjacency_.end(), adj[v].begin(), adj[v].end());
    mesh.incidence_.insert(mesh.incidence_.end(), inc[v].begin(), inc[v].end());
  }

  // Boundary edges, lengths and per-vertex boundary mass.
  mesh.boundary_mass_.assign(mesh.boundary_.size(), 0.0);
  double length_sum = 0.0;
  mesh.min_edge_length_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(mesh.edges_.size()); ++i) {
    const Edge& e = mesh.edges_[i];
    const double len = (mesh.vertices_[e.v1] - mesh.vertices_[e.v0]).norm();
    length_sum += len;
    mesh.min_edge_length_ = std::min(mesh.min_edge_length_, len);
    if (!e.is_boundary()) continue;
    mesh.boundary_edges_.push_back(i);
    mesh.boundary_edge_lengths_.push_back(len);
    mesh.boundary_mass_[mesh.boundary_slot(e.v0)] += 0.5 * len;
    mesh.boundary_mass_[mesh.boundary_slot(e.v1)] += 0.5 * len;
  }
  mesh.mean_edge_length_ = length_sum / static_cast<double>(mesh.edges_.size());

  Vec2 lo = mesh.vertices_[0], hi = mesh.vertices_[0];
  for (const Vec2& p : mesh.vertices_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  mesh.bbox_diagonal_ = (hi - lo).norm();
  return mesh;
}

int TriMesh::find_edge(int a, int b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

double TriMesh::triangle_area(int t) const {
  const Tri& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

Eigen::VectorXd vertex_areas(const TriMesh& mesh) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double third = mesh.triangle_area(t) / 3.0;
    for (int v : mesh.triangle(t)) a[v] += third;
  }
  return a;
}

namespace {

double corner_cotangent(const TriMesh& mesh, int t, int apex) {
  const Tri& tri = mesh.triangle(t);
  int k = 0;
  while (tri[k] != apex) ++k;
  const Vec2 u = mesh.vertex(tri[(k + 1) % 3]) - mesh.vertex(apex);
  const Vec2 w = mesh.vertex(tri[(k + 2) % 3]) - mesh.vertex(apex);
  return u.dot(w) / (u.x() * w.y() - u.y() * w.x());
}

int apex_of(const TriMesh& mesh, int t, const Edge& e) {
  for (int v : mesh.triangle(t))
    if (v != e.v0 && v != e.v1) return v;
  return -1;
}

}  // namespace

double opposite_cotangent_sum(const TriMesh& mesh, const Edge& edge) {
  double sum = corner_cotangent(mesh, edge.t0, apex_of(mesh, edge.t0, edge));
  if (!edge.is_boundary()) sum += corner_cotangent(mesh, edge.t1, apex_of(mesh, edge.t1, edge));
  return sum;
}

std::vector<int> check_delaunay(const TriMesh& mesh) {
  std::vector<int> violations;
  const auto& edges = mesh.edges();
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const Edge& e = edges[i];
    if (e.is_boundary()) continue;
    const double c0 = corner_cotangent(mesh, e.t0, apex_of(mesh, e.t0, e));
    const double c1 = corner_cotangent(mesh, e.t1, apex_of(mesh, e.t1, e));
    const double slack = 1e-12 * (1.0 + std::abs(c0) + std::abs(c1));
    if (c0 + c1 < -slack) violations.push_back(i);
  }
  return violations;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::filesystem::path with_extension(std::filesystem::path p, const char* ext) {
  const auto e = p.extension();
  if (e == ".node" || e == ".ele") p.replace_extension();
  p += ext;
  return p;
}

TriMesh load_triangle(const std::filesystem::path& path) {
  const auto node_path = with_extension(path, ".node");
  const auto ele_path = with_extension(path, ".ele");

  detail::TokenReader node(node_path);
  const long nv = node.next_int("vertex count");
  const long dim = node.next_int("dimension");
  const long nattr = node.next_int("attribute count");
  const long nmark = node.next_int("boundary marker count");
  if (nv <= 0) throw Error(ErrorCode::Parse, node_path.string() + ": no vertices");
  if (dim != 2) throw Error(ErrorCode::Parse, node_path.string() + ": dimension must be 2");
  if (nattr < 0 || nmark < 0 || nmark > 1) {
    throw Error(ErrorCode::Parse, node_path.string() + ": bad attribute/marker counts");
  }

  std::vector<Vec2> vertices(nv);
  long base = 0;
  for (long i = 0; i < nv; ++i) {
    const long idx = node.next_int("vertex index");
    if (i == 0) {
      if (idx != 0 && idx != 1) {
        throw Error(ErrorCode::Parse, node_path.string() + ": first vertex index must be 0 or 1");
      }
      base = idx;
    }
    if (idx != i + base) {
      throw Error(ErrorCode::Parse, node_path.string() + ": vertex indices must be consecutive");
    }
    const double x = node.next_double("x");
    const double y = node.next_double("y");
    vertices[i] = Vec2(x, y);
    for (long a = 0; a < nattr + nmark; ++a) node.next_double("attribute");
  }

  detail::TokenReader ele(ele_path);
  const long nt = ele.next_int("triangle count");
  const long npt = ele.next_int("nodes per triangle");
  const long eattr = ele.next_int("attribute count");
  if (nt <= 0) throw Error(ErrorCode::Parse, ele_path.string() + ": no triangles");
  if (npt != 3) throw Error(ErrorCode::Parse, ele_path.string() + ": only 3-node triangles are supported");
  if (eattr < 0) throw Error(ErrorCode::Parse, ele_path.string() + ": bad attribute count");
  std::vector<Tri> triangles(nt);
  for (long i = 0; i < nt; ++i) {
    ele.next_int("triangle index");
    for (int k = 0; k < 3; ++k) {
      const long v = ele.next_int("triangle vertex") - base;
      if (v < 0 || v >= nv) {
        throw Error(ErrorCode::Parse, ele_path.string() + ": vertex index out of range in triangle " +
                                          std::to_string(i));
      }
      triangles[i][k] = static_cast<int>(v);
    }
    for (long a = 0; a < eattr; ++a) ele.next_double("attribute");
  }
  return TriMesh::build(std::move(vertices), std::move(triangles));
}

TriMesh load_off(const std::filesystem::path& path) {
  detail::TokenReader in(path);
  const std::string magic = in.next_word("OFF header");
  if (magic != "OFF") throw Error(ErrorCode::Parse, path.string() + ": missing OFF header");
  const long nv = in.next_int("vertex count");
  const long nf = in.next_int("face count");
  in.next_int("edge count");
  if (nv <= 0 || nf <= 0) throw Error(ErrorCode::Parse, path.string() + ": empty mesh");
  std::vector<Vec2> vertices(nv);
  for (long i = 0; i < nv; ++i) {
    const double x = in.next_double("x");
    const double y = in.next_double("y");
    const double z = in.next_double("z");
    if (z != 0.0) throw Error(ErrorCode::Parse, path.string() + ": vertices must lie in z = 0");
    vertices[i] = Vec2(x, y);
  }
  std::vector<Tri> triangles(nf);
  for (long i = 0; i < nf; ++i) {
    if (in.next_int("face size") != 3) {
      throw Error(ErrorCode::Parse, path.string() + ": only triangular faces are supported");
    }
    for (int k = 0; k < 3; ++k) {
      const long v = in.next_int("face vertex");
      if (v < 0 || v >= nv) {
        throw Error(ErrorCode::Parse, path.string() + ": vertex index out of range in face " +
                                          std::to_string(i));
      }
      triangles[i][k] = static_cast<int>(v);
    }
    in.skip_line();
  }
  return TriMesh::build(std::move(vertices), std::move(triangles));
}

}  // namespace

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  return format == MeshFormat::Off ? load_off(path) : load_triangle(path);
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return load_mesh(path, ext == ".off" ? MeshFormat::Off : MeshFormat::TriangleNodeEle);
}

void save_off(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ostringstream os;
  os.precision(17);
  os << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << " 0\n";
  for (const Vec2& p : mesh.vertices()) os << p.x() << ' ' << p.y() << " 0\n";
  for (const Tri& t : mesh.triangles()) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  detail::write_file_atomic(path, os.str());
}

void save_triangle(const TriMesh& mesh, const std::filesystem::path& stem) {
  std::ostringstream node;
  node.precision(17);
  node << mesh.num_vertices() << " 2 0 1\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    node << v << ' ' << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << ' '
         << (mesh.is_boundary(v) ? 1 : 0) << '\n';
  }
  std::ostringstream ele;
  ele << mesh.num_triangles() << " 3 0\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Tri& tri = mesh.triangle(t);
    ele << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  detail::write_file_atomic(with_extension(stem, ".node"), node.str());
  detail::write_file_atomic(with_extension(stem, ".ele"), ele.str());
}

}  // namespace divpath
