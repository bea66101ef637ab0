#pragma once

#include <span>
#include <vector>

#include "divpath/mesh.hpp"

namespace divpath::detail {

/// Grid on which generated points are snapped so the orientation and
/// in-circle predicates can be evaluated exactly in 128-bit integers.
struct SnapGrid {
  double scale = 1.0;  // a power of two

  /// Picks the finest grid keeping every |coordinate| below 2^25 grid units.
  static SnapGrid for_extent(double max_abs_coordinate);

  double snap(double x) const;
  Vec2 snap(const Vec2& p) const { return {snap(p.x()), snap(p.y())}; }
};

/// Bowyer-Watson Delaunay triangulation of points that already lie on `grid`.
/// Returns counter-clockwise triangles over the convex hull.
std::vector<Tri> delaunay_triangulate(std::span<const Vec2> points, const SnapGrid& grid);

/// Flips interior edges until every one is locally Delaunay. Triangles must
/// form a valid planar triangulation.
void lawson_flip(std::span<const Vec2> points, std::vector<Tri>& triangles);

}  // namespace divpath::detail
