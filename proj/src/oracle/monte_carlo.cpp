#include "repeaterscope/oracle/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "repeaterscope/errors.hpp"

namespace repeaterscope::oracle {

namespace {

// Integer tallies; exact, so merging partial sums is order independent.
struct Tally {
  std::vector<std::vector<std::uint64_t>> level_counts;
  std::vector<std::uint64_t> end_counts;
  std::vector<std::uint64_t> resets;
  std::uint64_t completed = 0;
  std::uint64_t end_sum = 0, end_sq = 0;
  std::vector<std::uint64_t> swap_sum, swap_sq, dist_sum, dist_sq;
  std::uint64_t swap_total_sq = 0, dist_total_sq = 0;

  Tally(int levels, int multiplexing)
      : level_counts(levels, std::vector<std::uint64_t>(multiplexing + 1, 0)),
        end_counts(multiplexing + 1, 0),
        resets(levels, 0),
        swap_sum(levels, 0), swap_sq(levels, 0), dist_sum(levels, 0), dist_sq(levels, 0) {}

  void merge(const Tally& o) {
    for (std::size_t i = 0; i < level_counts.size(); ++i) {
      for (std::size_t k = 0; k < level_counts[i].size(); ++k) level_counts[i][k] += o.level_counts[i][k];
      resets[i] += o.resets[i];
      swap_sum[i] += o.swap_sum[i];
      swap_sq[i] += o.swap_sq[i];
      dist_sum[i] += o.dist_sum[i];
      dist_sq[i] += o.dist_sq[i];
    }
    for (std::size_t k = 0; k < end_counts.size(); ++k) end_counts[k] += o.end_counts[k];
    completed += o.completed;
    end_sum += o.end_sum;
    end_sq += o.end_sq;
    swap_total_sq += o.swap_total_sq;
    dist_total_sq += o.dist_total_sq;
  }
};

bool flag(const std::vector<bool>& v, int i) { return i < static_cast<int>(v.size()) && v[i]; }
double success(const std::vector<double>& v, int i) { return i < static_cast<int>(v.size()) ? v[i] : 1.0; }

int binomial(SplitMix64& rng, int n, double p) {
  int k = 0;
  for (int t = 0; t < n; ++t) k += rng.bernoulli(p) ? 1 : 0;
  return k;
}

void run_trial(const cascade::CascadeConfig& cfg, const std::vector<int>& capacity, SplitMix64& rng,
               std::vector<int>& y, Tally& t) {
  const int n = cfg.depth;
  y.assign(cfg.links(), 0);
  for (int& yj : y) yj = binomial(rng, cfg.multiplexing, cfg.pi0);

  std::vector<std::uint64_t> swaps(n + 1, 0), dists(n + 1, 0);
  bool reset = false;
  for (int i = 0; i <= n && !reset; ++i) {
    if (std::any_of(y.begin(), y.end(), [&](int v) { return v < cfg.reset_threshold; })) {
      ++t.resets[i];
      reset = true;
      break;
    }
    for (int v : y) ++t.level_counts[i][v];
    if (flag(cfg.distill, i)) {
      const double d = success(cfg.distill_success, i);
      for (int& v : y) {
        dists[i] += v / 2;
        v = binomial(rng, v / 2, d);
      }
    }
    if (i == n) break;
    std::vector<int> next(y.size() / 2);
    for (std::size_t s = 0; s < next.size(); ++s) {
      const int m = std::min(y[2 * s], y[2 * s + 1]);
      swaps[i] += m;
      next[s] = std::min(m, capacity[i + 1]);
    }
    y = std::move(next);
  }

  std::uint64_t swap_total = 0, dist_total = 0;
  for (int i = 0; i <= n; ++i) {
    t.swap_sum[i] += swaps[i];
    t.swap_sq[i] += swaps[i] * swaps[i];
    t.dist_sum[i] += dists[i];
    t.dist_sq[i] += dists[i] * dists[i];
    swap_total += swaps[i];
    dist_total += dists[i];
  }
  t.swap_total_sq += swap_total * swap_total;
  t.dist_total_sq += dist_total * dist_total;
  if (!reset) {
    const auto end = static_cast<std::uint64_t>(y.front());
    ++t.completed;
    ++t.end_counts[end];
    t.end_sum += end;
    t.end_sq += end * end;
  }
}

Estimate estimate(std::uint64_t sum, std::uint64_t sq, std::uint64_t trials) {
  const double n = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / n;
  const double var = std::max(0.0, static_cast<double>(sq) / n - mean * mean);
  return {mean, trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0};
}

cascade::PairCountDistribution normalized(const std::vector<std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(counts.size()));
  if (total > 0) {
    for (std::size_t k = 0; k < counts.size(); ++k) p[k] = static_cast<double>(counts[k]) / total;
  }
  return cascade::PairCountDistribution(std::move(p));
}

}  // namespace

SplitMix64 SplitMix64::for_trial(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 mixer(seed ^ (trial * 0x9E3779B97F4A7C15ULL));
  return SplitMix64(mixer.next());
}

MonteCarloReport mc_cascade(const cascade::CascadeConfig& config, const MonteCarloConfig& mc) {
  config.validate();
  if (mc.trials == 0) throw ConfigError("mc_cascade: trials must be positive");
  const int levels = config.depth + 1;
  std::vector<int> capacity;
  for (int i = 0; i < levels; ++i) capacity.push_back(config.capacity(i));

  const int workers = std::max(1, std::min<int>(mc.threads, static_cast<int>(std::min<std::uint64_t>(mc.trials, 64))));
  std::vector<Tally> partial(workers, Tally(levels, config.multiplexing));
  auto work = [&](int w) {
    std::vector<int> y;
    for (std::uint64_t trial = w; trial < mc.trials; trial += workers) {
      SplitMix64 rng = SplitMix64::for_trial(mc.seed, trial);
      run_trial(config, capacity, rng, y, partial[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Tally t(levels, config.multiplexing);
  for (const auto& p : partial) t.merge(p);

  MonteCarloReport rep;
  rep.trials = mc.trials;
  std::uint64_t swap_sum = 0, dist_sum = 0;
  for (int i = 0; i < levels; ++i) {
    rep.level_pmf.push_back(normalized(t.level_counts[i]));
    rep.reset_fraction.push_back(static_cast<double>(t.resets[i]) / mc.trials);
    rep.swaps_per_level.push_back(estimate(t.swap_sum[i], t.swap_sq[i], mc.trials));
    rep.distillations_per_level.push_back(estimate(t.dist_sum[i], t.dist_sq[i], mc.trials));
    swap_sum += t.swap_sum[i];
    dist_sum += t.dist_sum[i];
  }
  rep.end_pmf = normalized(t.end_counts);
  rep.completion = estimate(t.completed, t.completed, mc.trials);
  rep.end_pairs = estimate(t.end_sum, t.end_sq, mc.trials);
  rep.swaps = estimate(swap_sum, t.swap_total_sq, mc.trials);
  rep.distillations = estimate(dist_sum, t.dist_total_sq, mc.trials);
  return rep;
}

ChainEstimate mc_chain(const protocol::ProtocolConfig& config, const MonteCarloConfig& mc) {
  ChainEstimate out;
  out.analytic = protocol::evaluate_chain_detailed(config);
  out.mc = mc_cascade(out.analytic.cascade_config, mc);
  const double uses = config.normalization == protocol::SkrNormalization::PerChannelUse
                          ? config.multiplexing
                          : static_cast<double>(config.multiplexing) * config.links();
  const double scale = out.analytic.point.key_fraction / uses;
  out.skr_pcu = {out.mc.end_pairs.mean * scale, out.mc.end_pairs.se * scale};
  return out;
}

double total_variation(const cascade::PairCountDistribution& a, const cascade::PairCountDistribution& b) {
  const int top = std::max(a.max_count(), b.max_count());
  double tv = 0.0;
  for (int k = 0; k <= top; ++k) tv += std::abs(a[k] - b[k]);
  return 0.5 * tv;
}

}  // namespace repeaterscope::oracle
