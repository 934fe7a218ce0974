#include "repeaterscope/metrics.hpp"

#include <limits>

#include "repeaterscope/errors.hpp"
#include "repeaterscope/protocol.hpp"

namespace repeaterscope::metrics {

void CostModel::validate() const {
  if (gates_per_swap < 0 || measurements_per_swap < 0 || gates_per_distill < 0 || measurements_per_distill < 0) {
    throw ConfigError("cost model counts must be non-negative");
  }
}

OperationCounts ops_per_burst(const cascade::CascadeReport& report, const std::vector<bool>& distill,
                              int links, const CostModel& cost) {
  cost.validate();
  const int levels = static_cast<int>(report.p_cond.size());
  OperationCounts out;
  out.swaps_per_level.assign(levels, 0.0);
  out.distillations_per_level.assign(levels, 0.0);
  int segments = links;
  for (int i = 0; i < levels; ++i) {
    const double alive = report.survival[i];
    if (i < static_cast<int>(distill.size()) && distill[i]) {
      const auto& y = report.p_cond[i];
      double attempts = 0.0;
      for (int k = 2; k <= y.max_count(); ++k) attempts += (k / 2) * y.probs[k];
      out.distillations_per_level[i] = alive * segments * attempts;
    }
    if (i + 1 < levels) {
      out.swaps_per_level[i] = alive * (segments / 2) * cascade::pair_minimum(report.q_cond[i]).mean();
    }
    out.swaps += out.swaps_per_level[i];
    out.distillations += out.distillations_per_level[i];
    segments /= 2;
  }
  out.two_qubit_gates = out.swaps * cost.gates_per_swap + out.distillations * cost.gates_per_distill;
  out.measurements = out.swaps * cost.measurements_per_swap + out.distillations * cost.measurements_per_distill;
  return out;
}

std::optional<double> ops_per_secret_bit(const protocol::PerformancePoint& point) {
  if (!(point.secret_bits_per_burst > 0.0)) return std::nullopt;
  return point.ops.two_qubit_gates / point.secret_bits_per_burst;
}

std::optional<double> nodes_per_secret_bit(const protocol::PerformancePoint& point) {
  if (!(point.secret_bits_per_burst > 0.0)) return std::nullopt;
  return static_cast<double>((1 << point.depth) - 1) / point.secret_bits_per_burst;
}

Eigen::MatrixXd ratio_grid(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ConfigError("ratio_grid: grid shapes differ");
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double num = a(i, j);
      const double den = b(i, j);
      if (den != 0.0) {
        out(i, j) = num / den;
      } else if (num > 0.0) {
        out(i, j) = std::numeric_limits<double>::infinity();
      } else {
        out(i, j) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return out;
}

}  // namespace repeaterscope::metrics
