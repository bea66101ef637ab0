#include "divpath/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_set>

#include "delaunay.hpp"
#include "divpath/error.hpp"

namespace divpath {

namespace {

constexpr double kPi = std::numbers::pi;

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

std::vector<Vec2> regular_polygon(const Vec2& centre, double radius, int sides, double phase) {
  std::vector<Vec2> out;
  for (int i = 0; i < sides; ++i) {
    const double a = phase + 2.0 * kPi * i / sides;
    out.emplace_back(centre.x() + radius * std::cos(a), centre.y() + radius * std::sin(a));
  }
  return out;
}

/// Uniform bucket grid over segments for distance queries.
class SegmentGrid {
 public:
  SegmentGrid(const std::vector<std::pair<Vec2, Vec2>>& segments, double cell, double reach)
      : segments_(segments), cell_(cell) {
    lo_ = segments.front().first;
    Vec2 hi = lo_;
    for (const auto& [a, b] : segments) {
      lo_ = lo_.cwiseMin(a).cwiseMin(b);
      hi = hi.cwiseMax(a).cwiseMax(b);
    }
    lo_ -= Vec2::Constant(reach + cell);
    hi += Vec2::Constant(reach + cell);
    nx_ = static_cast<int>(std::ceil((hi.x() - lo_.x()) / cell)) + 1;
    ny_ = static_cast<int>(std::ceil((hi.y() - lo_.y()) / cell)) + 1;
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
      const auto& [a, b] = segments[s];
      const Vec2 smin = a.cwiseMin(b) - Vec2::Constant(reach);
      const Vec2 smax = a.cwiseMax(b) + Vec2::Constant(reach);
      for (int ix = cell_x(smin.x()); ix <= cell_x(smax.x()); ++ix)
        for (int iy = cell_y(smin.y()); iy <= cell_y(smax.y()); ++iy)
          buckets_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(s);
    }
  }

  /// Distance to the nearest segment, or +inf if none lies within `reach`.
  double distance(const Vec2& p) const {
    const int ix = cell_x(p.x()), iy = cell_y(p.y());
    if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return INFINITY;
    double best = INFINITY;
    for (int s : buckets_[static_cast<std::size_t>(iy) * nx_ + ix]) {
      best = std::min(best, segment_distance(p, segments_[s].first, segments_[s].second));
    }
    return best;
  }

 private:
  int cell_x(double x) const { return std::clamp(static_cast<int>((x - lo_.x()) / cell_), 0, nx_ - 1); }
  int cell_y(double y) const { return std::clamp(static_cast<int>((y - lo_.y()) / cell_), 0, ny_ - 1); }

  const std::vector<std::pair<Vec2, Vec2>>& segments_;
  double cell_;
  Vec2 lo_;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace

bool contains(const PolygonDomain& domain, const Vec2& p) {
  bool inside = false;
  for (const auto& loop : domain.loops) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[j];
      if ((a.y() > p.y()) != (b.y() > p.y())) {
        const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
        if (p.x() < x) inside = !inside;
      }
    }
  }
  return inside;
}

TriMesh generate_disk_mesh(int rings) {
  if (rings < 2) throw Error(ErrorCode::InvalidArgument, "generate_disk_mesh: rings must be at least 2");

  std::vector<Vec2> pts{Vec2::Zero()};
  std::vector<int> ring_start{0};
  for (int i = 1; i <= rings; ++i) {
    ring_start.push_back(static_cast<int>(pts.size()));
    const int count = 6 * i;
    const double r = static_cast<double>(i) / rings;
    for (int j = 0; j < count; ++j) {
      const double a = 2.0 * kPi * j / count;
      if (i == rings) {
        pts.emplace_back(std::cos(a), std::sin(a));
      } else {
        pts.emplace_back(r * std::cos(a), r * std::sin(a));
      }
    }
  }

  std::vector<Tri> tris;
  for (int j = 0; j < 6; ++j) tris.push_back({0, 1 + j, 1 + (j + 1) % 6});
  // Zip each pair of neighbouring rings together by advancing along the
  // ring whose next vertex comes first in angle.
  for (int i = 2; i <= rings; ++i) {
    const int ni = 6 * (i - 1), no = 6 * i;
    const int si = ring_start[i - 1], so = ring_start[i];
    int a = 0, b = 0;
    while (a < ni || b < no) {
      const double next_inner = (a + 1.0) / ni;
      const double next_outer = (b + 1.0) / no;
      const int va = si + a % ni, vb = so + b % no;
      if (b < no && (a >= ni || next_outer <= next_inner)) {
        tris.push_back({va, vb, so + (b + 1) % no});
        ++b;
      } else {
        tris.push_back({va, vb, si + (a + 1) % ni});
        ++a;
      }
    }
  }
  detail::lawson_flip(pts, tris);
  return TriMesh::build(std::move(pts), std::move(tris));
}

TriMesh mesh_polygon_domain(const PolygonDomain& domain, double spacing, std::uint64_t seed) {
  if (domain.loops.empty() || !(spacing > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mesh_polygon_domain: empty domain or nonpositive spacing");
  }
  double extent = 0.0;
  for (const auto& loop : domain.loops)
    for (const Vec2& p : loop) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  const auto grid = detail::SnapGrid::for_extent(extent + 2.0 * spacing);

  // Boundary samples, snapped; the snapped loops define the meshed domain.
  PolygonDomain snapped;
  std::vector<Vec2> points;
  std::vector<std::pair<int, int>> segments;
  for (const auto& loop : domain.loops) {
    std::vector<Vec2> samples;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[(i + 1) % n];
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / spacing - 1e-9)));
      for (int j = 0; j < pieces; ++j) {
        const Vec2 p = grid.snap(Vec2(a + (b - a) * (static_cast<double>(j) / pieces)));
        if (samples.empty() || (samples.back() - p).norm() > 0.0) samples.push_back(p);
      }
    }
    if (samples.size() > 1 && samples.front() == samples.back()) samples.pop_back();
    const int base = static_cast<int>(points.size());
    const int m = static_cast<int>(samples.size());
    for (int j = 0; j < m; ++j) segments.emplace_back(base + j, base + (j + 1) % m);
    points.insert(points.end(), samples.begin(), samples.end());
    snapped.loops.push_back(std::move(samples));
  }

  std::vector<std::pair<Vec2, Vec2>> seg_geom;
  for (const auto& [a, b] : segments) seg_geom.emplace_back(points[a], points[b]);
  const SegmentGrid seg_grid(seg_geom, spacing, spacing);

  Vec2 lo = points.front(), hi = points.front();
  for (const Vec2& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.08 * spacing, 0.08 * spacing);
  const double row_height = spacing * std::sqrt(3.0) / 2.0;
  const int rows = static_cast<int>(std::ceil((hi.y() - lo.y()) / row_height)) + 1;
  const int cols = static_cast<int>(std::ceil((hi.x() - lo.x()) / spacing)) + 2;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Vec2 p(lo.x() + (c + (r % 2 ? 0.5 : 0.0)) * spacing, lo.y() + r * row_height);
      p += Vec2(jitter(rng), jitter(rng));
      p = grid.snap(p);
      if (!contains(snapped, p)) continue;
      if (seg_grid.distance(p) < 0.5 * spacing) continue;
      points.push_back(p);
    }
  }

  std::vector<Tri> dt = detail::delaunay_triangulate(points, grid);
  std::vector<Tri> kept;
  for (const Tri& t : dt) {
    const Vec2 c = (points[t[0]] + points[t[1]] + points[t[2]]) / 3.0;
    if (contains(snapped, c)) kept.push_back(t);
  }

  std::unordered_set<std::uint64_t> edges;
  auto key = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };
  for (const Tri& t : kept)
    for (int k = 0; k < 3; ++k) edges.insert(key(t[k], t[(k + 1) % 3]));
  for (const auto& [a, b] : segments) {
    if (!edges.count(key(a, b))) {
      throw Error(ErrorCode::Degenerate, "mesh_polygon_domain: boundary segment lost; refine spacing");
    }
  }

  // Drop any point left without triangles and renumber.
  std::vector<int> remap(points.size(), -1);
  for (const Tri& t : kept)
    for (int v : t) remap[v] = 0;
  std::vector<Vec2> used;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (remap[i] == 0) {
      remap[i] = static_cast<int>(used.size());
      used.push_back(points[i]);
    }
  }
  for (Tri& t : kept)
    for (int& v : t) v = remap[v];
  return TriMesh::build(std::move(used), std::move(kept));
}

PolygonDomain corridor_domain(double length, double width) {
  return {{{Vec2(0, 0), Vec2(length, 0), Vec2(length, width), Vec2(0, width)}}};
}

PolygonDomain convex_holes_domain() {
  PolygonDomain d;
  d.loops.push_back({Vec2(0, 0), Vec2(4, 0), Vec2(4, 3), Vec2(0, 3)});
  d.loops.push_back(regular_polygon(Vec2(1.0, 1.0), 0.45, 6, 0.1));
  d.loops.push_back(regular_polygon(Vec2(2.3, 2.0), 0.5, 5, 0.3));
  d.loops.push_back(regular_polygon(Vec2(3.1, 0.85), 0.4, 8, 0.2));
  d.loops.push_back(regular_polygon(Vec2(1.15, 2.3), 0.35, 7, 0.0));
  return d;
}

PolygonDomain concave_blob_domain() {
  std::vector<Vec2> loop;
  const int samples = 120;
  for (int i = 0; i < samples; ++i) {
    const double a = 2.0 * kPi * i / samples;
    const double r = 1.0 + 0.3 * std::cos(3.0 * a) + 0.08 * std::sin(5.0 * a + 0.4);
    loop.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return {{loop}};
}

namespace {

TriMesh mesh_to_count(const PolygonDomain& domain, int target_vertices) {
  // Area of the region enclosed with even-odd rule (outer minus holes).
  double area = 0.0, perimeter = 0.0;
  for (std::size_t l = 0; l < domain.loops.size(); ++l) {
    const auto& loop = domain.loops[l];
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec2& p = loop[i];
      const Vec2& q = loop[(i + 1) % loop.size()];
      a += p.x() * q.y() - q.x() * p.y();
      perimeter += (q - p).norm();
    }
    area += (l == 0 ? 1.0 : -1.0) * std::abs(0.5 * a);
  }
  // n ~ area / (0.866 h^2) + perimeter / (2h), solved for u = 1/h.
  const double qa = area / (std::sqrt(3.0) / 2.0);
  const double qb = perimeter / 2.0;
  const double n = static_cast<double>(target_vertices);
  double h = 2.0 * qa / (-qb + std::sqrt(qb * qb + 4.0 * qa * n));
  TriMesh mesh = mesh_polygon_domain(domain, h);
  for (int iter = 0; iter < 6; ++iter) {
    const double ratio = static_cast<double>(mesh.num_vertices()) / target_vertices;
    if (std::abs(ratio - 1.0) < 0.03) break;
    h *= std::sqrt(ratio);
    mesh = mesh_polygon_domain(domain, h);
  }
  return mesh;
}

}  // namespace

TriMesh make_test_mesh(std::string_view name, int resolution) {
  if (resolution <= 0) throw Error(ErrorCode::InvalidArgument, "make_test_mesh: resolution must be positive");
  if (name == "disk") return generate_disk_mesh(resolution);
  if (name == "corridor") return mesh_to_count(corridor_domain(4.0, 1.0), resolution);
  if (name == "long-corridor") return mesh_to_count(corridor_domain(50.0, 1.0), resolution);
  if (name == "convex-holes") return mesh_to_count(convex_holes_domain(), resolution);
  if (name == "concave") return mesh_to_count(concave_blob_domain(), resolution);
  throw Error(ErrorCode::InvalidArgument, "unknown test domain '" + std::string(name) + "'");
}

}  // namespace divpath
