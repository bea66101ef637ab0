#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "divpath/mesh.hpp"

namespace divpath {

struct ContourSegment {
  Vec2 a, b;
};

struct ContourLevel {
  double value = 0.0;
  std::vector<ContourSegment> segments;
};

/// `count` levels equally spaced strictly between min and max of the field.
/// A constant field has no levels.
std::vector<double> contour_levels(const Eigen::VectorXd& values, int count = 10);

/// Marching triangles: one segment per triangle crossed by each level, from
/// the linear interpolant.
std::vector<ContourLevel> extract_contours(const TriMesh& mesh, const Eigen::VectorXd& values,
                                           const std::vector<double>& levels);

struct RenderPath {
  std::vector<Vec2> points;
  std::string colour = "#ff3030";
};

struct RenderOptions {
  int levels = 10;
  double width_px = 800.0;
  std::optional<Vec2> source;
  std::optional<Vec2> target;
};

/// Self-contained SVG 1.1: per-triangle fill from the mean vertex value,
/// white contours, path polylines and source/target markers. Without values
/// the mesh is drawn as a wireframe.
std::string render_svg(const TriMesh& mesh, const std::optional<Eigen::VectorXd>& values,
                       const std::vector<RenderPath>& paths, const RenderOptions& options = {});

void write_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace divpath
