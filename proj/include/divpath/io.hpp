#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "divpath/divergence.hpp"
#include "divpath/fields.hpp"
#include "divpath/paths.hpp"

namespace divpath {

using Json = nlohmann::ordered_json;

/// "vertex,value" header then one row per vertex.
void write_field_csv(const ScalarField& field, const std::filesystem::path& path);
/// Values indexed by vertex; rows may come in any order but must cover
/// 0..n-1 exactly once.
Eigen::VectorXd read_field_csv(const std::filesystem::path& path);

Json field_metadata(const ScalarField& field);
void write_field_json(const ScalarField& field, const std::filesystem::path& path);

/// "x,y" header then one row per path point.
void write_path_csv(const TracedPath& path, const std::filesystem::path& file);
std::vector<Vec2> read_path_csv(const std::filesystem::path& file);

Json path_to_json(const TracedPath& path);
void write_path_json(const TracedPath& path, const std::filesystem::path& file);

Json sparsity_json(const SparsityReport& report);

/// Pretty-printed JSON written atomically.
void write_json(const Json& json, const std::filesystem::path& file);

}  // namespace divpath
