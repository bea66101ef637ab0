#include "divpath/fields.hpp"

#include <array>
#include <utility>

namespace divpath {

namespace {

constexpr std::array<std::pair<FieldKind, const char*>, 13> kNames{{
    {FieldKind::DirichletGreen, "dirichlet-green"},
    {FieldKind::NeumannGreen, "neumann-green"},
    {FieldKind::HeatDirichlet, "heat-dirichlet"},
    {FieldKind::HeatNeumann, "heat-neumann"},
    {FieldKind::Resistance, "resistance"},
    {FieldKind::Biharmonic, "biharmonic"},
    {FieldKind::TV, "tv"},
    {FieldKind::KL, "kl"},
    {FieldKind::Chi2, "chi2"},
    {FieldKind::Hellinger, "hellinger"},
    {FieldKind::Alpha, "alpha"},
    {FieldKind::Power, "power"},
    {FieldKind::CustomF, "custom-f"},
}};

}  // namespace

const char* to_string(FieldKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "?";
}

std::optional<FieldKind> field_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  return std::nullopt;
}

}  // namespace divpath
