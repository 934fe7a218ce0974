#include "repeaterscope/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repeaterscope/errors.hpp"

namespace repeaterscope::cascade {

namespace {

// Binomial(n, p) pmf, writing p(k) for k = 0..min(n, cap) into `out`. Terms are
// built by ratio recurrence outward from the mode and normalized over the full
// support, which keeps the mass at 1 to rounding for large n.
void binomial_row(int n, double p, int cap, Eigen::VectorXd& out) {
  const int top = std::min(n, cap);
  out.setZero(top + 1);
  if (p <= 0.0) {
    out[0] = 1.0;
    return;
  }
  if (p >= 1.0) {
    if (n <= cap) out[n] = 1.0;
    return;
  }
  const double odds = p / (1.0 - p);
  const int mode = std::min(n, static_cast<int>(std::floor((n + 1) * p)));
  Eigen::VectorXd full(n + 1);
  full[mode] = 1.0;
  for (int k = mode; k < n; ++k) full[k + 1] = full[k] * odds * (n - k) / (k + 1);
  for (int k = mode; k > 0; --k) full[k - 1] = full[k] / odds * k / (n - k + 1);
  out = full.head(top + 1) / full.sum();
}

PairCountDistribution truncated(const PairCountDistribution& dist, int cap) {
  if (dist.max_count() <= cap) return dist;
  return PairCountDistribution(dist.probs.head(cap + 1));
}

bool flag(const std::vector<bool>& flags, int i) {
  return i < static_cast<int>(flags.size()) && flags[i];
}

double success_at(const std::vector<double>& d, int i) {
  return i < static_cast<int>(d.size()) ? d[i] : 1.0;
}

}  // namespace

PairCountDistribution PairCountDistribution::delta(int k, int max_count) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(max_count + 1);
  p[k] = 1.0;
  return PairCountDistribution(std::move(p));
}

double PairCountDistribution::mean() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
  return m;
}

int CascadeConfig::capacity(int level) const {
  int halvings = 0;
  for (int j = 0; j < level; ++j) halvings += flag(distill, j) ? 1 : 0;
  return multiplexing >> halvings;
}

void CascadeConfig::validate() const {
  if (depth < 0 || depth > 24) throw ConfigError("cascade: depth must lie in [0, 24]");
  if (multiplexing < 1) throw ConfigError("cascade: multiplexing must be at least 1");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw ConfigError("cascade: pi0 must lie in [0,1]");
  if (reset_threshold < 1) throw ConfigError("cascade: reset threshold must be at least 1");
  if (static_cast<int>(distill.size()) > depth + 1) throw ConfigError("cascade: more distillation flags than levels");
  if (flag(distill, depth)) throw ConfigError("cascade: no distillation at the top level");
  int scheduled = 0;
  for (int i = 0; i <= depth; ++i) {
    if (!flag(distill, i)) continue;
    ++scheduled;
    const double d = success_at(distill_success, i);
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("cascade: distillation success must lie in [0,1]");
  }
  if (scheduled >= 31 || multiplexing < (1 << scheduled)) {
    throw ScheduleError("cascade: multiplexing " + std::to_string(multiplexing) + " cannot feed " +
                        std::to_string(scheduled) + " distillation rounds");
  }
}

CascadeConfig CascadeConfig::plain(int depth, int multiplexing, double pi0) {
  CascadeConfig c;
  c.depth = depth;
  c.multiplexing = multiplexing;
  c.pi0 = pi0;
  c.distill.assign(static_cast<std::size_t>(depth) + 1, false);
  c.distill_success.assign(static_cast<std::size_t>(depth) + 1, 1.0);
  return c;
}

double CascadeReport::max_mass_defect() const {
  double worst = 0.0;
  for (double m : mass_defect) worst = std::max(worst, std::abs(m));
  return worst;
}

PairCountDistribution generation_distribution(int multiplexing, double pi0) {
  if (multiplexing < 1) throw DomainError("generation_distribution: M must be at least 1");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw DomainError("generation_distribution: pi0 must lie in [0,1]");
  Eigen::VectorXd probs;
  binomial_row(multiplexing, pi0, multiplexing, probs);
  return PairCountDistribution(std::move(probs));
}

PairCountDistribution distillation_thinning(const PairCountDistribution& dist, bool distill,
                                            double success, int cap) {
  if (!distill) return truncated(dist, cap);
  if (!(success >= 0.0 && success <= 1.0)) throw DomainError("distillation_thinning: d must lie in [0,1]");
  if (cap < 0) throw DomainError("distillation_thinning: negative capacity");
  const int max_in = dist.max_count();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cap + 1);
  Eigen::VectorXd row;
  for (int j = 0; j <= max_in; ++j) {
    const double pj = dist.probs[j];
    if (pj == 0.0) continue;
    binomial_row(j / 2, success, cap, row);
    out.head(row.size()) += pj * row;
  }
  return PairCountDistribution(std::move(out));
}

PairCountDistribution pair_minimum(const PairCountDistribution& dist) {
  const int top = dist.max_count();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(top + 1);
  double above = 0.0;  // sum of dist[j] for j > k
  for (int k = top; k >= 0; --k) {
    const double qk = dist.probs[k];
    out[k] = qk * qk + 2.0 * qk * above;
    above += qk;
  }
  return PairCountDistribution(std::move(out));
}

ConditionalInit conditional_init(int multiplexing, double pi0, int reset_threshold) {
  if (reset_threshold < 1) throw DomainError("conditional_init: R0 must be at least 1");
  PairCountDistribution gen = generation_distribution(multiplexing, pi0);
  const int cut = std::min(reset_threshold, gen.max_count() + 1);
  const double reset = gen.probs.head(cut).sum();
  const double keep = gen.probs.tail(gen.probs.size() - cut).sum();
  if (!(keep > 0.0)) throw CertainReset("conditional_init: every link falls below the reset threshold");
  gen.probs.head(cut).setZero();
  gen.probs /= keep;
  return {reset, std::move(gen)};
}

ConditionalLevel conditional_level_update(const PairCountDistribution& q_prev_cond, bool reset_gate,
                                          int cap, int reset_threshold, ResetRule rule) {
  const PairCountDistribution paired = truncated(pair_minimum(q_prev_cond), cap);
  const int floor_count = rule == ResetRule::Literal ? 1 : reset_threshold;

  double reset = 0.0;
  if (reset_gate) {
    if (rule == ResetRule::Literal) {
      const double q0 = q_prev_cond[0];
      double tail = 0.0;
      for (int j = 2; j <= q_prev_cond.max_count(); ++j) tail += q_prev_cond.probs[j];
      reset = q0 * q0 + 2.0 * q0 * tail;
    } else {
      for (int k = 0; k < floor_count && k <= paired.max_count(); ++k) reset += paired.probs[k];
    }
  }
  if (!(reset < 1.0)) throw CertainReset("conditional_level_update: level resets with certainty");

  Eigen::VectorXd probs = paired.probs / (1.0 - reset);
  probs.head(std::min<Eigen::Index>(floor_count, probs.size())).setZero();
  const double mass = probs.sum();
  if (!(mass > 0.0)) throw CertainReset("conditional_level_update: no mass above the reset threshold");
  probs /= mass;
  return {reset, PairCountDistribution(std::move(probs)), 1.0 - mass};
}

ResetProfile reset_probability_f(const std::vector<double>& r, int links) {
  ResetProfile out;
  out.f.resize(r.size());
  out.survival.resize(r.size());
  double alive = 1.0;
  int segments = links;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0 && r[i] <= 1.0)) throw DomainError("reset_probability_f: r must lie in [0,1]");
    const double level_survival = std::pow(1.0 - r[i], segments);
    out.f[i] = (1.0 - level_survival) * alive;
    alive *= level_survival;
    out.survival[i] = alive;
    segments = std::max(1, segments / 2);
  }
  out.completion_prob = alive;
  return out;
}

CascadeReport run_cascade(const CascadeConfig& config) {
  config.validate();
  const int n = config.depth;
  CascadeReport rep;
  for (int i = 0; i <= n; ++i) rep.capacity.push_back(config.capacity(i));

  auto level_cap = [&](int i) { return flag(config.distill, i) ? rep.capacity[i] / 2 : rep.capacity[i]; };

  rep.p.push_back(generation_distribution(config.multiplexing, config.pi0));
  for (int i = 0; i <= n; ++i) {
    rep.q.push_back(distillation_thinning(rep.p[i], flag(config.distill, i),
                                          success_at(config.distill_success, i), level_cap(i)));
    if (i < n) rep.p.push_back(truncated(pair_minimum(rep.q[i]), rep.capacity[i + 1]));
  }

  ConditionalInit init = conditional_init(config.multiplexing, config.pi0, config.reset_threshold);
  rep.r.push_back(init.reset_prob);
  rep.p_cond.push_back(std::move(init.conditional));
  rep.mass_defect.push_back(0.0);
  for (int i = 0; i <= n; ++i) {
    rep.q_cond.push_back(distillation_thinning(rep.p_cond[i], flag(config.distill, i),
                                               success_at(config.distill_success, i), level_cap(i)));
    if (i == n) break;
    const bool gate = config.reset_rule == ResetRule::Literal ? flag(config.distill, i + 1) : true;
    ConditionalLevel lvl = conditional_level_update(rep.q_cond[i], gate, rep.capacity[i + 1],
                                                    config.reset_threshold, config.reset_rule);
    rep.r.push_back(lvl.reset_prob);
    rep.p_cond.push_back(std::move(lvl.conditional));
    rep.mass_defect.push_back(lvl.mass_defect);
  }

  ResetProfile profile = reset_probability_f(rep.r, config.links());
  rep.f = std::move(profile.f);
  rep.survival = std::move(profile.survival);
  rep.completion_prob = profile.completion_prob;
  rep.expected_end_pairs = rep.completion_prob * rep.p_cond[n].mean();
  return rep;
}

}  // namespace repeaterscope::cascade
