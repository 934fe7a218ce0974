#pragma once

// Exact evolution of the Bell-pair-count distribution through a nested
// swapping chain with optional per-level distillation.
//
// Level i holds N / 2^i segments. Each segment starts a level with Y_i pairs,
// optionally distills them pairwise (X_i surviving pairs), and is then swapped
// with its neighbour, leaving min(X_left, X_right) pairs at level i + 1.

#include <Eigen/Core>

#include <vector>

namespace repeaterscope::cascade {

/// Probability vector over pair counts k = 0..size()-1.
struct PairCountDistribution {
  Eigen::VectorXd probs;

  PairCountDistribution() = default;
  explicit PairCountDistribution(Eigen::VectorXd p) : probs(std::move(p)) {}

  static PairCountDistribution delta(int k, int max_count);

  int max_count() const { return static_cast<int>(probs.size()) - 1; }
  double operator[](int k) const { return k < probs.size() ? probs[k] : 0.0; }
  double mass() const { return probs.sum(); }
  double mean() const;
};

/// How the conditional reset probability at levels i >= 1 is formed.
enum class ResetRule {
  /// r_i = P(min(X_left, X_right) < R0): every way of ending a level below the
  /// threshold resets. Conditional distributions stay unit-mass.
  Consistent,
  /// Transcription of the published recursion: the sum over the partner runs
  /// from j = 2 (so the (0, 1) pairing does not reset) and the formula is gated
  /// on the current level's own distillation flag. Leaves a mass defect that
  /// is renormalized and reported.
  Literal,
};

struct CascadeConfig {
  int depth = 0;                    // n, with N = 2^n elementary links
  int multiplexing = 1;             // M channels per link per burst
  double pi0 = 0.0;                 // elementary success probability
  std::vector<bool> distill;        // D_i, i = 0..n (D_n must be false)
  std::vector<double> distill_success;  // d_i, i = 0..n
  int reset_threshold = 1;          // R0
  ResetRule reset_rule = ResetRule::Consistent;

  int links() const { return 1 << depth; }
  /// M_i = floor(M / 2^(sum_{j<i} D_j)).
  int capacity(int level) const;
  void validate() const;

  /// Config with no distillation anywhere.
  static CascadeConfig plain(int depth, int multiplexing, double pi0);
};

struct CascadeReport {
  // Unconditional track: p_i (before distillation) and q_i (after).
  std::vector<PairCountDistribution> p;
  std::vector<PairCountDistribution> q;
  // Conditional track, given no reset up to and including level i.
  std::vector<PairCountDistribution> p_cond;
  std::vector<PairCountDistribution> q_cond;
  std::vector<double> r;            // conditional reset probability per level
  std::vector<double> f;            // unconditional reset probability per level
  std::vector<double> survival;     // P(no reset at levels 0..i)
  std::vector<double> mass_defect;  // 1 - mass of p_cond before renormalization
  std::vector<int> capacity;        // M_i
  double completion_prob = 0.0;
  double expected_end_pairs = 0.0;

  double max_mass_defect() const;
};

/// Binomial(M, pi0) pmf, evaluated in log space.
PairCountDistribution generation_distribution(int multiplexing, double pi0);

/// Pairwise distillation: floor(j/2) attempts each succeeding with d; an
/// unpaired pair is dropped. Identity when `distill` is false. The output
/// support is truncated to `cap`.
PairCountDistribution distillation_thinning(const PairCountDistribution& dist, bool distill,
                                            double success, int cap);

/// Distribution of min(K_left, K_right) for independent copies of `dist`.
PairCountDistribution pair_minimum(const PairCountDistribution& dist);

struct ConditionalInit {
  double reset_prob;
  PairCountDistribution conditional;
};

/// r0 = P(Binomial(M, pi0) < R0), with the pmf zeroed below R0 and rescaled.
ConditionalInit conditional_init(int multiplexing, double pi0, int reset_threshold = 1);

struct ConditionalLevel {
  double reset_prob;
  PairCountDistribution conditional;  // p'_i after renormalization
  double mass_defect;                 // 1 - mass before renormalization
};

/// One swap step of the conditional track. `reset_gate` enables the reset
/// formula (a level whose input cannot contain empty segments never resets).
/// The output support is truncated to `cap`.
ConditionalLevel conditional_level_update(const PairCountDistribution& q_prev_cond, bool reset_gate,
                                          int cap, int reset_threshold = 1,
                                          ResetRule rule = ResetRule::Consistent);

struct ResetProfile {
  std::vector<double> f;
  std::vector<double> survival;
  double completion_prob;
};

/// f_0 = 1 - (1 - r_0)^N and f_i = (1 - (1 - r_i)^(N/2^i)) prod_{j<i} (1 - r_j)^(N/2^j).
ResetProfile reset_probability_f(const std::vector<double>& r, int links);

/// Full recursion. Throws CertainReset if some level resets with probability one.
CascadeReport run_cascade(const CascadeConfig& config);

}  // namespace repeaterscope::cascade
