#pragma once

#include <functional>

namespace divpath {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) integration. The interval with the largest
/// error estimate is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |value|) or max_intervals is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    double rel_tol = 0.0, int max_intervals = 4096);

}  // namespace divpath
