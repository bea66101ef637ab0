#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "divpath/error.hpp"

namespace divpath::detail {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

struct IPoint {
  i64 x, y;
};

i128 orient(const IPoint& a, const IPoint& b, const IPoint& c) {
  return static_cast<i128>(b.x - a.x) * (c.y - a.y) - static_cast<i128>(b.y - a.y) * (c.x - a.x);
}

// Positive when d lies strictly inside the circumcircle of the CCW triangle abc.
int incircle_sign(const IPoint& a, const IPoint& b, const IPoint& c, const IPoint& d) {
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 alift = adx * adx + ady * ady;
  const i128 blift = bdx * bdx + bdy * bdy;
  const i128 clift = cdx * cdx + cdy * cdy;
  const i128 det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                   clift * (adx * bdy - bdx * ady);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

struct BwTriangle {
  std::array<int, 3> v;
  std::array<int, 3> n;  // neighbour across the edge opposite v[k]
  bool alive;
};

class BowyerWatson {
 public:
  explicit BowyerWatson(std::vector<IPoint> pts) : pts_(std::move(pts)) {
    n_real_ = static_cast<int>(pts_.size());
    const i64 big = i64{1} << 28;
    pts_.push_back({-big, -big / 2});
    pts_.push_back({big, -big / 2});
    pts_.push_back({0, big});
    tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
    mark_.push_back(0);
  }

  void insert(int p) {
    const int start = locate(p);
    ++stamp_;
    cavity_.clear();
    stack_.assign(1, start);
    mark_[start] = stamp_;
    while (!stack_.empty()) {
      const int t = stack_.back();
      stack_.pop_back();
      cavity_.push_back(t);
      for (int nb : tris_[t].n) {
        if (nb < 0 || mark_[nb] == stamp_) continue;
        const auto& v = tris_[nb].v;
        if (incircle_sign(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[p]) > 0) {
          mark_[nb] = stamp_;
          stack_.push_back(nb);
        }
      }
    }

    rim_.clear();
    for (int c : cavity_) {
      for (int k = 0; k < 3; ++k) {
        const int nb = tris_[c].n[k];
        if (nb >= 0 && mark_[nb] == stamp_) continue;
        rim_.push_back({tris_[c].v[(k + 1) % 3], tris_[c].v[(k + 2) % 3], nb});
      }
    }
    for (int c : cavity_) {
      tris_[c].alive = false;
      free_.push_back(c);
    }

    created_.clear();
    for (const auto& r : rim_) {
      const int id = allocate();
      tris_[id] = {{r.a, r.b, p}, {-1, -1, r.outside}, true};
      if (r.outside >= 0) {
        auto& o = tris_[r.outside];
        for (int k = 0; k < 3; ++k) {
          if (o.v[(k + 1) % 3] == r.b && o.v[(k + 2) % 3] == r.a) o.n[k] = id;
        }
      }
      created_.push_back(id);
    }
    for (int id : created_) {
      auto& t = tris_[id];
      for (int other : created_) {
        if (other == id) continue;
        const auto& o = tris_[other];
        if (o.v[0] == t.v[1]) t.n[0] = other;  // shares edge (b, p)
        if (o.v[1] == t.v[0]) t.n[1] = other;  // shares edge (p, a)
      }
    }
    last_ = created_.front();
  }

  std::vector<Tri> real_triangles() const {
    std::vector<Tri> out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= n_real_ || t.v[1] >= n_real_ || t.v[2] >= n_real_) continue;
      out.push_back({t.v[0], t.v[1], t.v[2]});
    }
    return out;
  }

 private:
  int allocate() {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      return id;
    }
    tris_.push_back({});
    mark_.push_back(0);
    return static_cast<int>(tris_.size()) - 1;
  }

  bool contains(int t, int p) const {
    const auto& v = tris_[t].v;
    for (int k = 0; k < 3; ++k) {
      if (orient(pts_[v[(k + 1) % 3]], pts_[v[(k + 2) % 3]], pts_[p]) < 0) return false;
    }
    return true;
  }

  int locate(int p) {
    int t = last_;
    if (t < 0 || !tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) ++t;
    }
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const auto& tri = tris_[t];
      int next = -1;
      for (int j = 0; j < 3; ++j) {
        const int k = static_cast<int>((j + step) % 3);
        if (orient(pts_[tri.v[(k + 1) % 3]], pts_[tri.v[(k + 2) % 3]], pts_[p]) < 0) {
          next = tri.n[k];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (tris_[i].alive && contains(i, p)) return i;
    }
    throw Error(ErrorCode::Degenerate, "delaunay: point location failed");
  }

  std::vector<IPoint> pts_;
  int n_real_ = 0;
  std::vector<BwTriangle> tris_;
  std::vector<int> free_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
  std::vector<int> cavity_, stack_, created_;
  struct RimEdge {
    int a, b, outside;
  };
  std::vector<RimEdge> rim_;
};

}  // namespace

SnapGrid SnapGrid::for_extent(double max_abs_coordinate) {
  SnapGrid g;
  const double extent = std::max(max_abs_coordinate, 1e-300);
  const int e = static_cast<int>(std::floor(std::log2(std::ldexp(1.0, 25) / extent)));
  g.scale = std::ldexp(1.0, e);
  return g;
}

double SnapGrid::snap(double x) const { return std::nearbyint(x * scale) / scale; }

std::vector<Tri> delaunay_triangulate(std::span<const Vec2> points, const SnapGrid& grid) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw Error(ErrorCode::Degenerate, "delaunay: need at least three points");
  std::vector<IPoint> ipts(n);
  for (int i = 0; i < n; ++i) {
    const double x = points[i].x() * grid.scale;
    const double y = points[i].y() * grid.scale;
    if (x != std::nearbyint(x) || y != std::nearbyint(y) || std::abs(x) > 0x1p26 || std::abs(y) > 0x1p26) {
      throw Error(ErrorCode::InvalidArgument, "delaunay: point " + std::to_string(i) + " is not on the snap grid");
    }
    ipts[i] = {static_cast<i64>(x), static_cast<i64>(y)};
  }

  // Insert in a snake-ordered bucket sweep so the walking locator stays local.
  const int cells = std::max(1, static_cast<int>(std::sqrt(n / 4.0)));
  i64 lox = ipts[0].x, hix = ipts[0].x, loy = ipts[0].y, hiy = ipts[0].y;
  for (const auto& p : ipts) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  auto cell_of = [&](i64 v, i64 lo, i64 hi) {
    if (hi == lo) return 0;
    return std::min(cells - 1, static_cast<int>(static_cast<double>(v - lo) / static_cast<double>(hi - lo) * cells));
  };
  std::vector<std::pair<std::int64_t, int>> order(n);
  for (int i = 0; i < n; ++i) {
    const int cy = cell_of(ipts[i].y, loy, hiy);
    int cx = cell_of(ipts[i].x, lox, hix);
    if (cy % 2 == 1) cx = cells - 1 - cx;
    order[i] = {static_cast<std::int64_t>(cy) * cells + cx, i};
  }
  std::sort(order.begin(), order.end());

  {
    std::vector<std::pair<i64, i64>> sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = {ipts[i].x, ipts[i].y};
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::Degenerate, "delaunay: duplicate points");
    }
  }

  BowyerWatson bw(std::move(ipts));
  for (const auto& [key, i] : order) bw.insert(i);
  return bw.real_triangles();
}

namespace {

double cot_at(const Vec2& apex, const Vec2& a, const Vec2& b) {
  const Vec2 u = a - apex, w = b - apex;
  return u.dot(w) / (u.x() * w.y() - u.y() * w.x());
}

double orient_d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

}  // namespace

void lawson_flip(std::span<const Vec2> points, std::vector<Tri>& triangles) {
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  };
  for (int pass = 0; pass < 1000; ++pass) {
    // Directed edge a->b maps to (triangle, corner opposite).
    std::unordered_map<std::uint64_t, std::pair<int, int>> half;
    half.reserve(triangles.size() * 3);
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
      for (int k = 0; k < 3; ++k) half[key(triangles[t][(k + 1) % 3], triangles[t][(k + 2) % 3])] = {t, k};
    }
    std::vector<char> touched(triangles.size(), 0);
    int flips = 0;
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
      for (int k = 0; k < 3 && !touched[t]; ++k) {
        const int c = triangles[t][k];
        const int a = triangles[t][(k + 1) % 3];
        const int b = triangles[t][(k + 2) % 3];
        auto it = half.find(key(b, a));
        if (it == half.end()) continue;
        const auto [u, ku] = it->second;
        if (touched[u]) continue;
        const int d = triangles[u][ku];
        const double c0 = cot_at(points[c], points[a], points[b]);
        const double c1 = cot_at(points[d], points[b], points[a]);
        if (c0 + c1 >= -1e-12 * (1.0 + std::abs(c0) + std::abs(c1))) continue;
        if (orient_d(points[c], points[a], points[d]) <= 0 || orient_d(points[c], points[d], points[b]) <= 0) continue;
        triangles[t] = {c, a, d};
        triangles[u] = {c, d, b};
        touched[t] = touched[u] = 1;
        ++flips;
      }
    }
    if (flips == 0) return;
  }
  throw Error(ErrorCode::Degenerate, "lawson_flip: did not converge");
}

}  // namespace divpath::detail
