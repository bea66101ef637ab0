#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "divpath/mesh.hpp"

namespace divpath {

/// Structured Delaunay triangulation of the unit disk: a centre vertex plus
/// `rings` concentric rings, ring i carrying 6i equally spaced vertices at
/// radius i / rings. The outer ring lies exactly on the unit circle.
TriMesh generate_disk_mesh(int rings);

/// Polygonal domain: loops[0] is the outer boundary, any further loops are
/// holes. Orientation of the loops does not matter.
struct PolygonDomain {
  std::vector<std::vector<Vec2>> loops;
};

/// Delaunay mesh of a polygonal domain with target edge length `spacing`.
/// Boundary segments are split uniformly; the interior is filled with a
/// jittered triangular lattice kept half a spacing away from the boundary.
/// Polygon corners must not be sharper than 90 degrees (seen from inside
/// the domain) so that every boundary piece survives in the triangulation.
TriMesh mesh_polygon_domain(const PolygonDomain& domain, double spacing, std::uint64_t seed = 1);

/// Even-odd containment test against all loops.
bool contains(const PolygonDomain& domain, const Vec2& p);

/// Axis-aligned length x width rectangle with its lower-left corner at 0.
PolygonDomain corridor_domain(double length, double width);
/// 4 x 3 rectangle with four convex polygonal holes.
PolygonDomain convex_holes_domain();
/// Simply connected, non-convex lobed blob of diameter about 2.6.
PolygonDomain concave_blob_domain();

/// Named test domains used by the CLI and the test suites. `resolution` is
/// the ring count for "disk" and the approximate vertex count otherwise.
/// Names: disk, corridor (4:1), long-corridor (50:1), convex-holes, concave.
TriMesh make_test_mesh(std::string_view name, int resolution);

}  // namespace divpath
