#include "repeaterscope/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "repeaterscope/errors.hpp"

namespace repeaterscope::sweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> steps(double lo, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
  return out;
}

// Runs job(i) for i in [0, count) on a pool of workers. The first exception
// is rethrown after all workers join.
template <typename Job>
void parallel_for(std::size_t count, int threads, Job job) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct ChainPoint {
  ChainVariant variant;
  double eps_g, t2, eta_hw, conv, distance;
};

SweepRow evaluate_point(const SweepSpec& spec, const ChainPoint& gp) {
  protocol::ProtocolConfig cfg;
  cfg.medium = spec.profile(gp.variant.medium);
  cfg.fixed_wavelength_nm = gp.variant.fixed_wavelength_nm;
  cfg.budget.eta_hardware = gp.eta_hw;
  cfg.budget.conv_eff = gp.conv;
  cfg.noise = states::NoiseParams::from_gate_error(gp.eps_g, gp.t2);
  cfg.multiplexing = spec.multiplexing;
  cfg.f_th = spec.f_th;
  cfg.normalization = spec.normalization;
  cfg.cost = spec.cost;

  const DepthOptimum best = optimize_depth(gp.distance, cfg, spec.depth_range);
  SweepRow row;
  row.medium = gp.variant.label();
  row.total_distance_km = gp.distance;
  row.conv_eff = gp.conv;
  row.eta_hardware = gp.eta_hw;
  row.t2_s = gp.t2;
  row.eps_g = gp.eps_g;
  row.f_th = spec.f_th;
  row.multiplexing = spec.multiplexing;
  row.wavelength_used = best.point.wavelength_nm;
  row.best_n = best.best_n;
  row.best_l0 = best.best_l0;
  row.skr_pcu = best.point.skr_pcu;
  row.completion_prob = best.point.completion_prob;
  row.expected_end_pairs = best.point.expected_end_pairs;
  row.key_fraction = best.point.key_fraction;
  row.ops_per_secret_bit = metrics::ops_per_secret_bit(best.point).value_or(kInf);
  row.nodes_per_secret_bit = metrics::nodes_per_secret_bit(best.point).value_or(kInf);
  row.mass_defect = best.point.mass_defect;
  return row;
}

WavelengthMapRow evaluate_map_point(const SweepSpec& spec, channel::MediumKind kind, double l0, double conv,
                                    double eta_hw) {
  const channel::MediumProfile medium = spec.profile(kind);
  channel::LinkBudget budget{eta_hw, conv, l0};
  WavelengthMapRow row;
  row.medium = std::string(medium.name());
  row.l0_km = l0;
  row.conv_eff = conv;
  row.eta_hardware = eta_hw;
  row.pi0_780 = medium.allows(channel::kMemoryWavelengthNm)
                    ? channel::elementary_success(medium, budget, channel::kMemoryWavelengthNm)
                    : kNaN;
  row.pi0_1550 = medium.allows(channel::kTelecomWavelengthNm)
                     ? channel::elementary_success(medium, budget, channel::kTelecomWavelengthNm)
                     : kNaN;
  row.wavelength_used = channel::select_wavelength(medium, budget).wavelength_nm;
  row.conv_threshold = medium.allows(channel::kMemoryWavelengthNm) && medium.allows(channel::kTelecomWavelengthNm)
                           ? channel::conversion_threshold(medium, l0)
                           : kNaN;
  return row;
}

}  // namespace

std::string ChainVariant::label() const {
  std::string s(channel::to_string(medium));
  if (fixed_wavelength_nm) s += "@" + std::to_string(*fixed_wavelength_nm);
  return s;
}

ChainVariant ChainVariant::parse(std::string_view label) {
  ChainVariant v;
  const auto at = label.find('@');
  v.medium = channel::medium_from_string(label.substr(0, at));
  if (at != std::string_view::npos) {
    try {
      v.fixed_wavelength_nm = std::stoi(std::string(label.substr(at + 1)));
    } catch (const std::exception&) {
      throw ConfigError("bad wavelength in variant '" + std::string(label) + "'");
    }
  }
  return v;
}

channel::MediumProfile SweepSpec::profile(channel::MediumKind kind) const {
  auto it = profiles.find(kind);
  return it != profiles.end() ? it->second : channel::MediumProfile::preset(kind);
}

void SweepSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("sweep: ") + what);
  };
  require(!variants.empty(), "no media");
  require(!conv_eff.empty() && !eta_hardware.empty(), "empty efficiency axis");
  for (const auto& [kind, prof] : profiles) prof.validate();
  for (const auto& v : variants) {
    if (v.fixed_wavelength_nm && !profile(v.medium).allows(*v.fixed_wavelength_nm)) {
      throw ConfigError("sweep: " + v.label() + " uses a wavelength the medium does not allow");
    }
  }
  for (double c : conv_eff) require(c >= 0.0 && c <= 1.0, "conv_eff outside [0,1]");
  for (double e : eta_hardware) require(e >= 0.0 && e <= 1.0, "eta_hardware outside [0,1]");
  if (kind == SweepKind::WavelengthMap) {
    require(!l0_km.empty(), "empty l0 axis");
    for (double l : l0_km) require(l > 0.0, "l0 must be positive");
    return;
  }
  require(!total_distance_km.empty() && !t2_s.empty() && !eps_g.empty(), "empty axis");
  require(!depth_range.empty(), "empty depth range");
  for (int n : depth_range) require(n >= 0 && n <= 12, "depths must lie in [0, 12]");
  for (double d : total_distance_km) require(d > 0.0, "total distances must be positive");
  for (double t : t2_s) require(t > 0.0, "t2 must be positive");
  for (double e : eps_g) require(e >= 0.0 && e <= 0.8, "eps_g outside [0, 0.8]");
  require(multiplexing >= 1, "multiplexing must be at least 1");
  require(f_th >= 0.0 && f_th <= 1.0, "f_th outside [0,1]");
  cost.validate();
}

DepthOptimum optimize_depth(double total_distance_km, const protocol::ProtocolConfig& base,
                            const std::vector<int>& depth_range) {
  if (depth_range.empty()) throw ConfigError("optimize_depth: empty depth range");
  if (!(total_distance_km > 0.0)) throw ConfigError("optimize_depth: distance must be positive");
  std::vector<int> depths = depth_range;
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());

  DepthOptimum best;
  bool have = false;
  for (int n : depths) {
    protocol::ProtocolConfig cfg = base;
    cfg.depth = n;
    cfg.budget.l0_km = std::ldexp(total_distance_km, -n);
    protocol::PerformancePoint pt = protocol::evaluate_chain(cfg);
    if (!have || pt.skr_pcu > best.point.skr_pcu) {
      best.best_n = n;
      best.best_l0 = cfg.budget.l0_km;
      best.point = std::move(pt);
      have = true;
    }
  }
  best.no_key = !(best.point.skr_pcu > 0.0);
  return best;
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  SweepResult result;
  result.kind = spec.kind;
  if (spec.kind == SweepKind::WavelengthMap) {
    struct MapPoint {
      channel::MediumKind kind;
      double eta, conv, l0;
    };
    std::vector<MapPoint> grid;
    for (const auto& v : spec.variants)
      for (double eta : spec.eta_hardware)
        for (double conv : spec.conv_eff)
          for (double l0 : spec.l0_km) grid.push_back({v.medium, eta, conv, l0});
    result.map_rows.resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
      result.map_rows[i] = evaluate_map_point(spec, grid[i].kind, grid[i].l0, grid[i].conv, grid[i].eta);
    });
    return result;
  }

  std::vector<ChainPoint> grid;
  for (const auto& v : spec.variants)
    for (double e : spec.eps_g)
      for (double t : spec.t2_s)
        for (double eta : spec.eta_hardware)
          for (double c : spec.conv_eff)
            for (double d : spec.total_distance_km) grid.push_back({v, e, t, eta, c, d});
  result.rows.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { result.rows[i] = evaluate_point(spec, grid[i]); });
  return result;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3", "fig5", "fig6", "fig7", "fig8", "skr_curves"};
  return names;
}

SweepSpec figure_preset(std::string_view name) {
  using channel::MediumKind;
  const ChainVariant hcf{MediumKind::HCF, std::nullopt};
  const ChainVariant hcf_telecom{MediumKind::HCF, channel::kTelecomWavelengthNm};
  const ChainVariant smf{MediumKind::SMF, std::nullopt};

  SweepSpec s;
  s.f_th = 0.95;
  s.multiplexing = 1024;
  s.t2_s = {1.0};
  s.eta_hardware = {1.0};
  if (name == "fig3") {
    s.kind = SweepKind::WavelengthMap;
    s.variants = {hcf, smf};
    s.l0_km = steps(1.0, 1.0, 100);
    s.conv_eff = steps(0.05, 0.05, 20);
  } else if (name == "fig5" || name == "fig7") {
    s.variants = {hcf, smf};
    s.total_distance_km = steps(100.0, 100.0, 10);
    s.conv_eff = steps(0.1, 0.1, 10);
    s.eps_g = {1e-4, 1e-3};
  } else if (name == "fig6") {
    s.variants = {hcf, smf};
    s.total_distance_km = steps(100.0, 100.0, 10);
    s.conv_eff = {0.5};
    s.eta_hardware = steps(0.1, 0.1, 10);
    s.eps_g = {1e-4, 1e-3};
  } else if (name == "fig8") {
    s.variants = {hcf, hcf_telecom, smf};
    s.total_distance_km = steps(50.0, 50.0, 20);
    s.conv_eff = {1.0, 0.5};
    s.eps_g = {1e-4, 1e-3, 1e-2};
  } else if (name == "skr_curves") {
    s.variants = {hcf, hcf_telecom, smf};
    s.total_distance_km = steps(50.0, 50.0, 20);
    s.conv_eff = {1.0, 0.5};
    s.eps_g = {1e-4, 1e-3, 1e-2};
    s.t2_s = {1.0, 0.1, 0.01};
  } else {
    throw ConfigError("unknown figure preset '" + std::string(name) + "'");
  }
  // Rounded axis values keep the CSV free of representation noise like 0.30000000000000004.
  for (auto* axis : {&s.conv_eff, &s.eta_hardware, &s.l0_km}) {
    for (double& x : *axis) x = std::round(x * 1e6) / 1e6;
  }
  return s;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& os) {
  const auto f = format_double;
  if (result.kind == SweepKind::WavelengthMap) {
    os << "medium,l0_km,conv_eff,eta_hardware,pi0_780,pi0_1550,wavelength_used,conv_threshold\n";
    for (const auto& r : result.map_rows) {
      os << r.medium << ',' << f(r.l0_km) << ',' << f(r.conv_eff) << ',' << f(r.eta_hardware) << ','
         << f(r.pi0_780) << ',' << f(r.pi0_1550) << ',' << r.wavelength_used << ',' << f(r.conv_threshold)
         << '\n';
    }
    return;
  }
  os << "medium,total_distance_km,conv_eff,eta_hardware,t2_s,eps_g,f_th,multiplexing,wavelength_used,"
        "best_n,best_l0,skr_pcu,completion_prob,expected_end_pairs,key_fraction,ops_per_secret_bit,"
        "nodes_per_secret_bit,mass_defect\n";
  for (const auto& r : result.rows) {
    os << r.medium << ',' << f(r.total_distance_km) << ',' << f(r.conv_eff) << ',' << f(r.eta_hardware) << ','
       << f(r.t2_s) << ',' << f(r.eps_g) << ',' << f(r.f_th) << ',' << r.multiplexing << ','
       << r.wavelength_used << ',' << r.best_n << ',' << f(r.best_l0) << ',' << f(r.skr_pcu) << ','
       << f(r.completion_prob) << ',' << f(r.expected_end_pairs) << ',' << f(r.key_fraction) << ','
       << f(r.ops_per_secret_bit) << ',' << f(r.nodes_per_secret_bit) << ',' << f(r.mass_defect) << '\n';
  }
}

std::vector<RatioRow> paired_ratios(const std::vector<SweepRow>& rows, const std::string& label_a,
                                    const std::string& label_b) {
  auto key_of = [](const SweepRow& r) {
    return std::make_tuple(r.eps_g, r.t2_s, r.eta_hardware, r.conv_eff, r.total_distance_km);
  };
  std::map<decltype(key_of(rows.front())), const SweepRow*> b_rows;
  for (const auto& r : rows)
    if (r.medium == label_b) b_rows[key_of(r)] = &r;

  std::vector<const SweepRow*> a_rows;
  std::vector<const SweepRow*> matched;
  for (const auto& r : rows) {
    if (r.medium != label_a) continue;
    auto it = b_rows.find(key_of(r));
    if (it == b_rows.end()) throw ConfigError("paired_ratios: no " + label_b + " row for a " + label_a + " point");
    a_rows.push_back(&r);
    matched.push_back(it->second);
  }
  const auto count = static_cast<Eigen::Index>(a_rows.size());
  Eigen::MatrixXd skr_a(count, 1), skr_b(count, 1), yield_a(count, 1), yield_b(count, 1);
  for (Eigen::Index i = 0; i < count; ++i) {
    skr_a(i) = a_rows[i]->skr_pcu;
    skr_b(i) = matched[i]->skr_pcu;
    // Secret bits per operation; the ratio of these is ops_b / ops_a.
    yield_a(i) = 1.0 / a_rows[i]->ops_per_secret_bit;
    yield_b(i) = 1.0 / matched[i]->ops_per_secret_bit;
  }
  const Eigen::MatrixXd skr_ratio = metrics::ratio_grid(skr_a, skr_b);
  const Eigen::MatrixXd ops_ratio = metrics::ratio_grid(yield_a, yield_b);

  std::vector<RatioRow> out;
  for (Eigen::Index i = 0; i < count; ++i) {
    const SweepRow& a = *a_rows[i];
    const SweepRow& b = *matched[i];
    out.push_back({a.eps_g, a.t2_s, a.eta_hardware, a.conv_eff, a.total_distance_km, a.skr_pcu, b.skr_pcu,
                   skr_ratio(i), a.ops_per_secret_bit, b.ops_per_secret_bit, ops_ratio(i), a.best_l0,
                   b.best_l0});
  }
  return out;
}

void write_ratio_csv(const std::vector<RatioRow>& rows, std::ostream& os) {
  const auto f = format_double;
  os << "eps_g,t2_s,eta_hardware,conv_eff,total_distance_km,skr_a,skr_b,skr_ratio,ops_a,ops_b,ops_ratio,"
        "best_l0_a,best_l0_b\n";
  for (const auto& r : rows) {
    os << f(r.eps_g) << ',' << f(r.t2_s) << ',' << f(r.eta_hardware) << ',' << f(r.conv_eff) << ','
       << f(r.total_distance_km) << ',' << f(r.skr_a) << ',' << f(r.skr_b) << ',' << f(r.skr_ratio) << ','
       << f(r.ops_a) << ',' << f(r.ops_b) << ',' << f(r.ops_ratio) << ',' << f(r.best_l0_a) << ','
       << f(r.best_l0_b) << '\n';
  }
}

}  // namespace repeaterscope::sweep
