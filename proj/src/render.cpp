#include "divpath/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "divpath/error.hpp"
#include "io_util.hpp"

namespace divpath {

std::vector<double> contour_levels(const Eigen::VectorXd& values, int count) {
  std::vector<double> out;
  if (values.size() == 0 || count <= 0) return out;
  const double lo = values.minCoeff(), hi = values.maxCoeff();
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return out;
  for (int i = 1; i <= count; ++i) out.push_back(lo + (hi - lo) * i / (count + 1));
  return out;
}

std::vector<ContourLevel> extract_contours(const TriMesh& mesh, const Eigen::VectorXd& values,
                                           const std::vector<double>& levels) {
  if (values.size() != mesh.num_vertices()) throw Error(ErrorCode::InvalidArgument, "field size does not match mesh");
  std::vector<ContourLevel> out;
  for (double level : levels) {
    ContourLevel cl;
    cl.value = level;
    for (const Tri& tri : mesh.triangles()) {
      Vec2 hits[3];
      int nh = 0;
      for (int k = 0; k < 3; ++k) {
        const int a = tri[k], b = tri[(k + 1) % 3];
        const bool above_a = values[a] > level, above_b = values[b] > level;
        if (above_a == above_b) continue;
        const double t = (level - values[a]) / (values[b] - values[a]);
        hits[nh++] = mesh.vertex(a) + t * (mesh.vertex(b) - mesh.vertex(a));
      }
      if (nh == 2) cl.segments.push_back({hits[0], hits[1]});
    }
    out.push_back(std::move(cl));
  }
  return out;
}

namespace {

// Piecewise-linear approximation of the viridis colour map.
std::string colour(double s) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(std::isfinite(s) ? s : 1.0, 0.0, 1.0) * (stops.size() - 1);
  const int i = std::min(static_cast<int>(s), static_cast<int>(stops.size()) - 2);
  const double f = s - i;
  char buf[32];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string render_svg(const TriMesh& mesh, const std::optional<Eigen::VectorXd>& values,
                       const std::vector<RenderPath>& paths, const RenderOptions& options) {
  Vec2 lo = mesh.vertex(0), hi = mesh.vertex(0);
  for (const Vec2& p : mesh.vertices()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 ext = (hi - lo).cwiseMax(1e-12);
  const double scale = options.width_px / ext.x();
  const double height = ext.y() * scale;
  const double pad = 10.0;
  auto X = [&](const Vec2& p) { return num(pad + (p.x() - lo.x()) * scale); };
  auto Y = [&](const Vec2& p) { return num(pad + (hi.y() - p.y()) * scale); };
  const double stroke = std::max(0.5, 0.15 * mesh.mean_edge_length() * scale);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(options.width_px + 2 * pad) +
       "\" height=\"" + num(height + 2 * pad) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#202020\"/>\n";

  s += "<g id=\"field\" stroke-width=\"0.3\">\n";
  double vlo = 0.0, vhi = 1.0;
  if (values) {
    if (values->size() != mesh.num_vertices()) throw Error(ErrorCode::InvalidArgument, "field size does not match mesh");
    vlo = values->minCoeff();
    vhi = values->maxCoeff();
  }
  for (const Tri& t : mesh.triangles()) {
    std::string fill = "none", edge = "#808080";
    if (values) {
      const double v = ((*values)[t[0]] + (*values)[t[1]] + (*values)[t[2]]) / 3.0;
      fill = vhi > vlo ? colour((v - vlo) / (vhi - vlo)) : colour(0.5);
      edge = fill;
    }
    s += "<polygon points=\"";
    for (int k = 0; k < 3; ++k) {
      const Vec2& p = mesh.vertex(t[k]);
      s += X(p) + "," + Y(p) + (k < 2 ? " " : "");
    }
    s += "\" fill=\"" + fill + "\" stroke=\"" + edge + "\"/>\n";
  }
  s += "</g>\n";

  if (values) {
    s += "<g id=\"contours\" stroke=\"#ffffff\" stroke-width=\"" + num(stroke * 0.5) + "\" fill=\"none\">\n";
    for (const ContourLevel& cl : extract_contours(mesh, *values, contour_levels(*values, options.levels))) {
      if (cl.segments.empty()) continue;
      s += "<path data-level=\"" + num(cl.value) + "\" d=\"";
      for (const auto& seg : cl.segments) s += "M" + X(seg.a) + " " + Y(seg.a) + "L" + X(seg.b) + " " + Y(seg.b);
      s += "\"/>\n";
    }
    s += "</g>\n";
  }

  s += "<g id=\"paths\" fill=\"none\" stroke-linejoin=\"round\">\n";
  for (const RenderPath& rp : paths) {
    if (rp.points.empty()) continue;
    s += "<polyline stroke=\"" + rp.colour + "\" stroke-width=\"" + num(stroke * 2) + "\" points=\"";
    for (std::size_t i = 0; i < rp.points.size(); ++i) s += (i ? " " : "") + X(rp.points[i]) + "," + Y(rp.points[i]);
    s += "\"/>\n";
  }
  s += "</g>\n";

  const double r = std::max(3.0, 0.6 * mesh.mean_edge_length() * scale);
  if (options.source) {
    s += "<circle id=\"source\" cx=\"" + X(*options.source) + "\" cy=\"" + Y(*options.source) + "\" r=\"" + num(r) +
         "\" fill=\"#30ff30\" stroke=\"#000000\"/>\n";
  }
  if (options.target) {
    s += "<circle id=\"target\" cx=\"" + X(*options.target) + "\" cy=\"" + Y(*options.target) + "\" r=\"" + num(r) +
         "\" fill=\"#ff3030\" stroke=\"#000000\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_svg(const std::string& svg, const std::filesystem::path& path) { detail::write_file_atomic(path, svg); }

}  // namespace divpath
