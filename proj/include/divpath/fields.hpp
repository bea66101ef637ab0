#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace divpath {

enum class FieldKind {
  DirichletGreen,
  NeumannGreen,
  HeatDirichlet,
  HeatNeumann,
  Resistance,
  Biharmonic,
  TV,
  KL,
  Chi2,
  Hellinger,
  Alpha,
  Power,
  CustomF,
};

const char* to_string(FieldKind kind);
std::optional<FieldKind> field_kind_from_string(std::string_view name);

struct FieldParams {
  std::optional<double> t;
  std::optional<double> alpha;
  std::optional<int> power;
};

/// Per-vertex distance values with descent orientation: values = orientation
/// * raw, and values[target] is the global minimum.
struct ScalarField {
  Eigen::VectorXd values;
  Eigen::VectorXd raw;
  FieldKind kind = FieldKind::DirichletGreen;
  int target = -1;
  FieldParams params;
  double orientation = 1.0;
  /// Relative residual of the defining linear system (0 where none applies).
  double residual = 0.0;
  bool precision_warning = false;
  /// Number of denominators clamped while evaluating divergence sums.
  long clamp_count = 0;
};

}  // namespace divpath
