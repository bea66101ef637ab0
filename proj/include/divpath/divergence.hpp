#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "divpath/fields.hpp"
#include "divpath/poisson_kernel.hpp"

namespace divpath {

/// Convex f on the positive reals with f(1) = 0.
struct FDivergence {
  std::string name;
  std::function<double(double)> f;
  bool strictly_convex = true;
  FieldKind kind = FieldKind::CustomF;
  FieldParams params;
};

/// Builtins: tv, kl, chi2, hellinger, alpha (params.alpha, not +-1),
/// power (params.power >= 1).
FDivergence builtin_f(std::string_view name, const FieldParams& params = {});

/// Wraps a user function after checking f(1) = 0 and sampled convexity.
FDivergence custom_f(std::string name, std::function<double(double)> f, bool strictly_convex = true);

struct DivergenceOptions {
  /// false: sum_b P_qb f(P_pb / P_qb), weighting by the query row q.
  /// true: weight by the target row p instead.
  bool weight_by_target = false;
  /// Zero denominators are raised to this floor; with clamp = false they
  /// raise ErrorCode::DivisionDomain instead.
  bool clamp = true;
  double floor = kLogFloor;
};

/// Multiply-add counter for divergence sums.
struct OpCounter {
  long ops = 0;
};

struct ClampStats {
  long clamps = 0;
};

/// Divergence between the kernel rows of target p and query q.
double dv_pair(const PoissonKernel& pk, const FDivergence& f, int p, int q, const DivergenceOptions& opts = {},
               OpCounter* counter = nullptr, ClampStats* stats = nullptr);

/// dv_pair at every vertex. Raises precision_warning when a clamp fires
/// for an interior query (boundary rows are indicators and clamp by design).
ScalarField dv_field(const PoissonKernel& pk, const FDivergence& f, int p, const DivergenceOptions& opts = {},
                     int threads = 0);

/// 1 / sqrt(n).
double default_threshold(int n);

/// Drops entries with P * k < threshold (mass below the uniform share
/// scaled by threshold); rows are not renormalized. threshold must be in
/// [0, 1).
PoissonKernel sparsify(PoissonKernel pk, double threshold);

struct SparsityReport {
  double threshold = 0.0;
  /// Percentage of dropped entries over interior rows.
  double percent = 0.0;
  double max_dropped_mass = 0.0;
};

SparsityReport sparsity_report(const PoissonKernel& pk);

/// Sparse evaluation. KL sums over the support of the weighting row using
/// stored logs for the other row. TV sums |P_q - P_p| over the union support
/// (absent entries 0) and adds |dropped_q - dropped_p|. Other f sum over the
/// union support with absent entries 0.
double dv_pair_sparse(const PoissonKernel& pk, const FDivergence& f, int p, int q,
                      const DivergenceOptions& opts = {}, OpCounter* counter = nullptr,
                      ClampStats* stats = nullptr);

ScalarField dv_field_sparse(const PoissonKernel& pk, const FDivergence& f, int p, const DivergenceOptions& opts = {});

}  // namespace divpath
