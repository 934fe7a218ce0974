#include "repeaterscope/protocol.hpp"

#include <cmath>

#include "repeaterscope/errors.hpp"

namespace repeaterscope::protocol {

void ProtocolConfig::validate() const {
  medium.validate();
  budget.validate();
  noise.validate();
  cost.validate();
  if (depth < 0 || depth > 20) throw ConfigError("protocol: depth must lie in [0, 20]");
  if (multiplexing < 1) throw ConfigError("protocol: multiplexing must be at least 1");
  if (!(f_th >= 0.0 && f_th <= 1.0)) throw ConfigError("protocol: f_th must lie in [0, 1]");
  if (fixed_wavelength_nm && !medium.allows(*fixed_wavelength_nm)) {
    throw UnsupportedWavelength(std::string(medium.name()) + " does not support " +
                                std::to_string(*fixed_wavelength_nm) + " nm");
  }
}

std::vector<bool> LevelTrace::distill_flags() const {
  std::vector<bool> out;
  for (const auto& l : levels) out.push_back(l.distill);
  return out;
}

std::vector<double> LevelTrace::distill_success() const {
  std::vector<double> out;
  for (const auto& l : levels) out.push_back(l.distill_success);
  return out;
}

double wait_time(int level, double l0_km, double velocity_km_s) {
  if (level < 0) throw DomainError("wait_time: level must be non-negative");
  if (!(velocity_km_s > 0.0)) throw DomainError("wait_time: velocity must be positive");
  return std::ldexp(l0_km / velocity_km_s, level);
}

LevelTrace build_schedule(const ProtocolConfig& config) {
  config.validate();
  const auto& noise = config.noise;
  LevelTrace trace;
  states::BellState s = states::initial_state(noise.eps_g);
  int halvings = 0;
  for (int i = 0; i <= config.depth; ++i) {
    LevelRecord rec;
    rec.level = i;
    rec.capacity = config.multiplexing >> halvings;
    rec.wait_time_s = wait_time(i, config.budget.l0_km, config.medium.signal_velocity_km_s);
    s = states::apply_dephasing(s, rec.wait_time_s, noise.t2);
    rec.pre = s;
    const bool below = s.fidelity() < config.f_th;
    if (i < config.depth && below && rec.capacity >= 2) {
      const auto out = states::dejmps(s, s, noise);
      rec.distill = true;
      rec.distill_success = out.success_prob;
      s = out.state;
      ++halvings;
    }
    rec.post = s;
    rec.fidelity = s.fidelity();
    trace.levels.push_back(rec);
    if (i < config.depth) s = states::swap(s, s, noise);
  }
  return trace;
}

ChainEvaluation evaluate_chain_detailed(const ProtocolConfig& config) {
  config.validate();
  ChainEvaluation ev;
  PerformancePoint& pt = ev.point;
  pt.depth = config.depth;
  pt.multiplexing = config.multiplexing;
  pt.l0_km = config.budget.l0_km;

  if (config.fixed_wavelength_nm) {
    pt.wavelength_nm = *config.fixed_wavelength_nm;
    pt.pi0 = channel::elementary_success(config.medium, config.budget, pt.wavelength_nm);
  } else {
    const auto choice = channel::select_wavelength(config.medium, config.budget);
    pt.wavelength_nm = choice.wavelength_nm;
    pt.pi0 = choice.pi0;
  }

  ev.trace = build_schedule(config);
  pt.end_state = ev.trace.end_state();
  pt.key_fraction = states::key_fraction(pt.end_state);

  auto& cc = ev.cascade_config;
  cc.depth = config.depth;
  cc.multiplexing = config.multiplexing;
  cc.pi0 = pt.pi0;
  cc.distill = ev.trace.distill_flags();
  cc.distill_success = ev.trace.distill_success();
  cc.reset_rule = config.reset_rule;

  try {
    ev.report = cascade::run_cascade(cc);
  } catch (const CertainReset& e) {
    pt.diagnostic = e.what();
    return ev;
  }
  const auto& rep = *ev.report;
  pt.completion_prob = rep.completion_prob;
  pt.expected_end_pairs = rep.expected_end_pairs;
  pt.mass_defect = rep.max_mass_defect();
  pt.secret_bits_per_burst = pt.expected_end_pairs * pt.key_fraction;
  const double uses = config.normalization == SkrNormalization::PerChannelUse
                          ? config.multiplexing
                          : static_cast<double>(config.multiplexing) * config.links();
  pt.skr_pcu = pt.secret_bits_per_burst / uses;
  pt.ops = metrics::ops_per_burst(rep, cc.distill, config.links(), config.cost);
  if (pt.key_fraction == 0.0) pt.diagnostic = "end-to-end state yields no secret key";
  return ev;
}

PerformancePoint evaluate_chain(const ProtocolConfig& config) {
  return evaluate_chain_detailed(config).point;
}

}  // namespace repeaterscope::protocol
