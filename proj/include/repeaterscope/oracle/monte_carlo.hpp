#pragma once

// Brute-force burst simulator used to validate the cascade recursion.
//
// Random source: SplitMix64. Trial t draws from the stream seeded with
// splitmix64(seed ^ (t * 0x9E3779B97F4A7C15)), so a trial's outcome does not
// depend on how trials are split across workers. Uniforms use the top 53 bits.

#include <cstdint>
#include <vector>

#include "repeaterscope/cascade.hpp"
#include "repeaterscope/protocol.hpp"

namespace repeaterscope::oracle {

struct MonteCarloConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
};

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

  static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial);

 private:
  std::uint64_t state_;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

struct MonteCarloReport {
  std::uint64_t trials = 0;
  // Empirical p'_i: pair count per segment at level i (before distillation),
  // pooled over segments of trials that pass the level's reset check.
  std::vector<cascade::PairCountDistribution> level_pmf;
  // End-to-end pair count given completion.
  cascade::PairCountDistribution end_pmf;
  std::vector<double> reset_fraction;  // fraction of all trials that reset at level i
  Estimate completion;
  Estimate end_pairs;  // unconditional, zero for reset trials
  std::vector<Estimate> swaps_per_level;
  std::vector<Estimate> distillations_per_level;
  Estimate swaps;
  Estimate distillations;
};

/// Simulates config.multiplexing Bernoulli(pi0) trials per link, Bernoulli(d)
/// per distillation attempt on floor(Y/2) pairs, min-pairing at every swap and
/// a reset whenever a segment holds fewer than R0 pairs.
MonteCarloReport mc_cascade(const cascade::CascadeConfig& config, const MonteCarloConfig& mc);

struct ChainEstimate {
  protocol::ChainEvaluation analytic;
  MonteCarloReport mc;
  Estimate skr_pcu;
};

/// Runs the protocol's schedule through mc_cascade and converts the sampled
/// end pairs to a key rate with the same normalization.
ChainEstimate mc_chain(const protocol::ProtocolConfig& config, const MonteCarloConfig& mc);

/// Total-variation distance between two pmfs on a common support.
double total_variation(const cascade::PairCountDistribution& a, const cascade::PairCountDistribution& b);

}  // namespace repeaterscope::oracle
