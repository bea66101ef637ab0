#include "divpath/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "divpath/error.hpp"
#include "io_util.hpp"

namespace divpath {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& file, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file, const std::string& header) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, file.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorCode::Parse, file.string() + ": expected header '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv(line));
    if (rows.back().size() != 2) {
      throw Error(ErrorCode::Parse, file.string() + ":" + std::to_string(rows.size() + 1) + ": expected two columns");
    }
  }
  return rows;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json location_json(const MeshLocation& loc) {
  Json j;
  switch (loc.type) {
    case MeshLocation::Type::Vertex:
      j["type"] = "vertex";
      j["vertex"] = loc.a;
      break;
    case MeshLocation::Type::Edge:
      j["type"] = "edge";
      j["edge"] = {loc.a, loc.b};
      j["t"] = loc.t;
      break;
    case MeshLocation::Type::Triangle:
      j["type"] = "triangle";
      j["triangle"] = loc.triangle;
      j["barycentric"] = {loc.bary[0], loc.bary[1], loc.bary[2]};
      break;
  }
  return j;
}

}  // namespace

void write_field_csv(const ScalarField& field, const std::filesystem::path& path) {
  std::string out = "vertex,value\n";
  for (int v = 0; v < field.values.size(); ++v) out += std::to_string(v) + "," + fmt(field.values[v]) + "\n";
  detail::write_file_atomic(path, out);
}

Eigen::VectorXd read_field_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, "vertex,value");
  if (rows.empty()) throw Error(ErrorCode::Parse, path.string() + ": no field values");
  Eigen::VectorXd values(static_cast<Eigen::Index>(rows.size()));
  std::vector<char> seen(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string& vs = rows[i][0];
    int v = -1;
    const auto [ptr, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), v);
    if (ec != std::errc() || ptr != vs.data() + vs.size() || v < 0 || v >= static_cast<int>(rows.size()) || seen[v]) {
      throw Error(ErrorCode::Parse, path.string() + ": bad or repeated vertex index '" + vs + "'");
    }
    seen[v] = 1;
    values[v] = parse_double(rows[i][1], path, static_cast<int>(i) + 2);
  }
  return values;
}

Json field_metadata(const ScalarField& field) {
  Json j;
  j["kind"] = to_string(field.kind);
  j["target"] = field.target;
  j["n"] = field.values.size();
  j["params"] = {{"t", optional_number(field.params.t)},
                 {"alpha", optional_number(field.params.alpha)},
                 {"power", field.params.power ? Json(*field.params.power) : Json(nullptr)}};
  j["orientation"] = field.orientation;
  j["residual"] = field.residual;
  j["precision_warning"] = field.precision_warning;
  j["clamp_count"] = field.clamp_count;
  if (field.values.size() > 0) {
    j["min"] = field.values.minCoeff();
    j["max"] = field.values.maxCoeff();
  }
  return j;
}

void write_field_json(const ScalarField& field, const std::filesystem::path& path) {
  write_json(field_metadata(field), path);
}

void write_path_csv(const TracedPath& path, const std::filesystem::path& file) {
  std::string out = "x,y\n";
  for (const Vec2& p : path.points) out += fmt(p.x()) + "," + fmt(p.y()) + "\n";
  detail::write_file_atomic(file, out);
}

std::vector<Vec2> read_path_csv(const std::filesystem::path& file) {
  const auto rows = read_csv(file, "x,y");
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pts.emplace_back(parse_double(rows[i][0], file, static_cast<int>(i) + 2),
                     parse_double(rows[i][1], file, static_cast<int>(i) + 2));
  }
  return pts;
}

Json path_to_json(const TracedPath& path) {
  Json j;
  j["source"] = path.source;
  j["target"] = path.target;
  j["status"] = to_string(path.status);
  j["stuck_vertex"] = path.stuck_vertex >= 0 ? Json(path.stuck_vertex) : Json(nullptr);
  j["length"] = path.length;
  Json pts = Json::array();
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    Json p = location_json(path.locations[i]);
    p["x"] = path.points[i].x();
    p["y"] = path.points[i].y();
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  return j;
}

void write_path_json(const TracedPath& path, const std::filesystem::path& file) { write_json(path_to_json(path), file); }

Json sparsity_json(const SparsityReport& report) {
  return Json{{"threshold", report.threshold},
              {"percent", report.percent},
              {"max_dropped_mass", report.max_dropped_mass}};
}

void write_json(const Json& json, const std::filesystem::path& file) {
  detail::write_file_atomic(file, json.dump(2) + "\n");
}

}  // namespace divpath
