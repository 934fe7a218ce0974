#pragma once

// Parameter sweeps, repeater-depth optimization and figure presets.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repeaterscope/channel.hpp"
#include "repeaterscope/metrics.hpp"
#include "repeaterscope/protocol.hpp"

namespace repeaterscope::sweep {

/// One transmission technology under test: a medium plus its wavelength
/// policy. Labels are "HCF", "SMF" or "<medium>@<nm>" for a pinned wavelength.
struct ChainVariant {
  channel::MediumKind medium = channel::MediumKind::HCF;
  std::optional<int> fixed_wavelength_nm;

  std::string label() const;
  static ChainVariant parse(std::string_view label);
  bool operator==(const ChainVariant&) const = default;
};

enum class SweepKind {
  Chain,          // depth-optimized chain evaluations
  WavelengthMap,  // per-link wavelength choice over (l0, conv_eff)
};

struct SweepSpec {
  SweepKind kind = SweepKind::Chain;
  std::vector<ChainVariant> variants = {ChainVariant{channel::MediumKind::HCF, std::nullopt},
                                        ChainVariant{channel::MediumKind::SMF, std::nullopt}};
  std::map<channel::MediumKind, channel::MediumProfile> profiles;  // overrides of the presets
  std::vector<double> total_distance_km;
  std::vector<double> l0_km;  // WavelengthMap only
  std::vector<double> conv_eff = {1.0};
  std::vector<double> eta_hardware = {1.0};
  std::vector<double> t2_s = {1.0};
  std::vector<double> eps_g = {1e-3};
  double f_th = 0.95;
  int multiplexing = 1024;
  std::vector<int> depth_range = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  protocol::SkrNormalization normalization = protocol::SkrNormalization::PerChannelUse;
  metrics::CostModel cost;
  std::string output_path;

  channel::MediumProfile profile(channel::MediumKind kind) const;
  void validate() const;
};

struct SweepRow {
  std::string medium;
  double total_distance_km = 0.0;
  double conv_eff = 0.0;
  double eta_hardware = 0.0;
  double t2_s = 0.0;
  double eps_g = 0.0;
  double f_th = 0.0;
  int multiplexing = 0;
  int wavelength_used = 0;
  int best_n = 0;
  double best_l0 = 0.0;
  double skr_pcu = 0.0;
  double completion_prob = 0.0;
  double expected_end_pairs = 0.0;
  double key_fraction = 0.0;
  double ops_per_secret_bit = 0.0;    // +inf in the no-key regime
  double nodes_per_secret_bit = 0.0;  // +inf in the no-key regime
  double mass_defect = 0.0;
};

struct WavelengthMapRow {
  std::string medium;
  double l0_km = 0.0;
  double conv_eff = 0.0;
  double eta_hardware = 0.0;
  double pi0_780 = 0.0;  // NaN when the medium does not allow 780 nm
  double pi0_1550 = 0.0;
  int wavelength_used = 0;
  double conv_threshold = 0.0;  // NaN when undefined for the medium
};

struct SweepResult {
  SweepKind kind = SweepKind::Chain;
  std::vector<SweepRow> rows;
  std::vector<WavelengthMapRow> map_rows;
};

struct DepthOptimum {
  int best_n = 0;
  double best_l0 = 0.0;
  protocol::PerformancePoint point;
  bool no_key = false;
};

/// Evaluates every depth in `depth_range` at l0 = total / 2^n and keeps the
/// highest key rate; ties go to the smaller depth.
DepthOptimum optimize_depth(double total_distance_km, const protocol::ProtocolConfig& base,
                            const std::vector<int>& depth_range);

/// Cartesian product of the spec's axes. Rows are ordered by variant, eps_g,
/// t2, eta_hardware, conv_eff, then distance, independent of `threads`.
SweepResult run_sweep(const SweepSpec& spec, int threads = 1);

/// Names accepted by figure_preset.
const std::vector<std::string>& preset_names();
SweepSpec figure_preset(std::string_view name);

/// Reads a sweep spec from JSON text (keys mirror SweepSpec fields).
SweepSpec spec_from_json(std::string_view text);
SweepSpec load_spec(const std::string& path);

void write_csv(const SweepResult& result, std::ostream& os);
void write_json(const SweepResult& result, std::ostream& os);

/// Side-by-side comparison of two variants on matching grid points.
/// skr_ratio = skr_a / skr_b; ops_ratio = ops_b / ops_a (operations per bit);
/// both follow ratio_grid's sentinel rules.
struct RatioRow {
  double eps_g, t2_s, eta_hardware, conv_eff, total_distance_km;
  double skr_a, skr_b, skr_ratio;
  double ops_a, ops_b, ops_ratio;
  double best_l0_a, best_l0_b;
};
std::vector<RatioRow> paired_ratios(const std::vector<SweepRow>& rows, const std::string& label_a,
                                    const std::string& label_b);
void write_ratio_csv(const std::vector<RatioRow>& rows, std::ostream& os);

/// printf("%.17g") with inf/nan spelled out; used for every CSV number.
std::string format_double(double x);

}  // namespace repeaterscope::sweep
