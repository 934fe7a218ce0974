#pragma once

#include <functional>

namespace repeaterscope::numeric {

struct QuadratureResult {
  double value;
  double error;
  int intervals;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [lo, hi].
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|). Throws NumericError
/// if `max_intervals` is exhausted first.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol = 1e-11, double abs_tol = 0.0, int max_intervals = 4000);

}  // namespace repeaterscope::numeric
