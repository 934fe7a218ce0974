#pragma once

// Static per-level schedule (F_th rule) and end-to-end evaluation of one
// repeater chain configuration.

#include <optional>
#include <string>
#include <vector>

#include "repeaterscope/cascade.hpp"
#include "repeaterscope/channel.hpp"
#include "repeaterscope/metrics.hpp"
#include "repeaterscope/states.hpp"

namespace repeaterscope::protocol {

/// Denominator for the per-burst secret bits.
enum class SkrNormalization {
  PerChannelUse,      // divide by M
  PerLinkChannelUse,  // divide by N * M
};

struct ProtocolConfig {
  channel::MediumProfile medium = channel::MediumProfile::hcf();
  channel::LinkBudget budget;
  states::NoiseParams noise;
  int depth = 0;
  int multiplexing = 1;
  double f_th = 0.95;
  std::optional<int> fixed_wavelength_nm;  // unset: adaptive selection
  SkrNormalization normalization = SkrNormalization::PerChannelUse;
  metrics::CostModel cost;
  cascade::ResetRule reset_rule = cascade::ResetRule::Consistent;

  int links() const { return 1 << depth; }
  double total_distance_km() const { return budget.l0_km * links(); }
  void validate() const;
};

struct LevelRecord {
  int level = 0;
  states::BellState pre;     // after this level's storage dephasing
  bool distill = false;
  double distill_success = 1.0;
  states::BellState post;    // after the optional distillation
  double fidelity = 1.0;     // fidelity of `post`
  double wait_time_s = 0.0;
  int capacity = 0;          // M_i
};

struct LevelTrace {
  std::vector<LevelRecord> levels;

  std::vector<bool> distill_flags() const;
  std::vector<double> distill_success() const;
  const states::BellState& end_state() const { return levels.back().post; }
};

/// Storage time before operating at a level: l0/v for heralding at level 0,
/// 2^i l0/v for swap confirmation at level i >= 1.
double wait_time(int level, double l0_km, double velocity_km_s);

/// Evaluates the representative state pipeline once and fixes the D_i flags:
/// dephase, distill if F_i < f_th and two pairs of capacity remain, swap.
LevelTrace build_schedule(const ProtocolConfig& config);

struct PerformancePoint {
  double skr_pcu = 0.0;
  double secret_bits_per_burst = 0.0;
  double expected_end_pairs = 0.0;
  double completion_prob = 0.0;
  double key_fraction = 0.0;
  double pi0 = 0.0;
  double mass_defect = 0.0;
  states::BellState end_state;
  metrics::OperationCounts ops;
  int wavelength_nm = 0;
  double l0_km = 0.0;
  int depth = 0;
  int multiplexing = 1;
  std::string diagnostic;  // non-empty when the chain could not deliver
};

/// Picks the wavelength, builds the schedule, runs the cascade and converts
/// the delivered pairs to secret bits.
PerformancePoint evaluate_chain(const ProtocolConfig& config);

/// Same as evaluate_chain, also returning the schedule and cascade report.
struct ChainEvaluation {
  PerformancePoint point;
  LevelTrace trace;
  std::optional<cascade::CascadeReport> report;
  cascade::CascadeConfig cascade_config;
};
ChainEvaluation evaluate_chain_detailed(const ProtocolConfig& config);

}  // namespace repeaterscope::protocol
