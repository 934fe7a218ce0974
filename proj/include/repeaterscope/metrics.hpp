#pragma once

// Operation accounting and cross-technology comparison helpers.

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

#include "repeaterscope/cascade.hpp"

namespace repeaterscope::protocol {
struct PerformancePoint;
}

namespace repeaterscope::metrics {

/// Cost of one entanglement swap and one distillation attempt.
struct CostModel {
  double gates_per_swap = 1.0;
  double measurements_per_swap = 2.0;
  double gates_per_distill = 2.0;
  double measurements_per_distill = 2.0;

  void validate() const;
};

/// Expected operations per burst, including bursts that later reset.
struct OperationCounts {
  std::vector<double> swaps_per_level;
  std::vector<double> distillations_per_level;
  double swaps = 0.0;
  double distillations = 0.0;
  double two_qubit_gates = 0.0;
  double measurements = 0.0;
};

/// Swaps at level i: survival_i * (N / 2^(i+1)) * E[min(X'_left, X'_right)].
/// Distillation attempts at level i: survival_i * (N / 2^i) * E[floor(Y'_i / 2)].
OperationCounts ops_per_burst(const cascade::CascadeReport& report, const std::vector<bool>& distill,
                              int links, const CostModel& cost = {});

/// Two-qubit gates per delivered secret bit; nullopt in the no-key regime.
std::optional<double> ops_per_secret_bit(const protocol::PerformancePoint& point);

/// Repeater nodes (N - 1) per delivered secret bit; nullopt in the no-key regime.
std::optional<double> nodes_per_secret_bit(const protocol::PerformancePoint& point);

/// Elementwise a / b. A zero denominator with a positive numerator maps to
/// +infinity (saturated bin); 0/0 maps to NaN (undefined, drawn blank).
Eigen::MatrixXd ratio_grid(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

inline bool is_saturated(double ratio) { return std::isinf(ratio) && ratio > 0.0; }
inline bool is_undefined(double ratio) { return std::isnan(ratio); }

}  // namespace repeaterscope::metrics
