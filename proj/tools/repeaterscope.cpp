// repeaterscope command-line front end.
//
//   repeaterscope link   --config chain.json
//   repeaterscope couple [--theta-max 0.05] [--steps 21] [--core-radius 5] [--na 0.12] [--bare]
//   repeaterscope chain  --config chain.json [--trace] [--oracle]
//   repeaterscope sweep  --config sweep.json --out rows.csv
//   repeaterscope figure fig5 --out fig5.csv
//
// Exit status: 0 success, 2 configuration error, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "repeaterscope/config.hpp"
#include "repeaterscope/coupling.hpp"
#include "repeaterscope/errors.hpp"
#include "repeaterscope/oracle/monte_carlo.hpp"
#include "repeaterscope/sweep.hpp"

namespace rs = repeaterscope;
using nlohmann::json;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

struct Common {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int threads = 0;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw rs::ConfigError(std::string("THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Opens --out if given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw rs::ConfigError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

json number(double x) {
  if (std::isfinite(x)) return x;
  return rs::sweep::format_double(x);
}

json state_json(const rs::states::BellState& s) { return {s.a(), s.b(), s.c(), s.d()}; }

rs::protocol::ProtocolConfig chain_config(const Common& c) {
  if (c.config_path.empty()) return {};
  return rs::config::protocol_from_json(rs::config::read_file(c.config_path));
}

void run_link(const Common& c) {
  const auto cfg = chain_config(c);
  const auto& m = cfg.medium;
  json out = {{"medium", std::string(m.name())}, {"l0_km", cfg.budget.l0_km}};
  for (int nm : m.allowed_wavelengths_nm) {
    out["eta_c_" + std::to_string(nm)] = rs::channel::eta_c(m, cfg.budget, nm);
    out["pi0_" + std::to_string(nm)] = rs::channel::elementary_success(m, cfg.budget, nm);
  }
  const auto choice = rs::channel::select_wavelength(m, cfg.budget);
  out["wavelength_used"] = choice.wavelength_nm;
  out["pi0"] = choice.pi0;
  if (m.allows(rs::channel::kMemoryWavelengthNm) && m.allows(rs::channel::kTelecomWavelengthNm)) {
    out["conv_threshold"] = rs::channel::conversion_threshold(m, cfg.budget.l0_km);
  }
  Output o(c.out_path);
  if (c.format == "json") {
    o.stream() << out.dump(2) << '\n';
    return;
  }
  std::string header, row;
  for (const auto& [k, v] : out.items()) {
    header += (header.empty() ? "" : ",") + k;
    row += (row.empty() ? "" : ",") +
           (v.is_number_float() ? rs::sweep::format_double(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump());
  }
  o.stream() << header << '\n' << row << '\n';
}

struct CoupleOptions {
  double theta_max = 0.05;
  int steps = 21;
  double core_radius_um = 5.0;
  double na = 0.0;  // 0: single-mode cutoff at 1550 nm
  bool bare = false;
};

void run_couple(const Common& c, const CoupleOptions& opt) {
  const double theta_max = opt.theta_max;
  const int steps = opt.steps;
  if (!(theta_max >= 0.0 && theta_max < 0.5) || steps < 2) {
    throw rs::ConfigError("couple: need 0 <= theta-max < 0.5 and at least 2 steps");
  }
  auto fiber = rs::coupling::StepIndexFiber::near_cutoff(rs::channel::kTelecomWavelengthNm, opt.core_radius_um);
  if (opt.na > 0.0) fiber.n1 = std::sqrt(fiber.n2 * fiber.n2 + opt.na * opt.na);
  fiber.ar_coated = !opt.bare;
  try {
    fiber.validate();
  } catch (const rs::DomainError& e) {
    throw rs::ConfigError(std::string("couple: ") + e.what());
  }
  const auto mode = rs::coupling::solve_mode(fiber, rs::channel::kTelecomWavelengthNm);
  const auto best = rs::coupling::optimize_waist(fiber, mode, rs::channel::kTelecomWavelengthNm);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  json rows = json::array();
  Output o(c.out_path);
  if (c.format == "csv") o.stream() << "theta_rad,eta_smf_1550,eta_constants_hcf\n";
  for (int i = 0; i < steps; ++i) {
    const double theta = theta_max * i / (steps - 1);
    const double smf = rs::coupling::tilted_eta({best.waist_um, rs::channel::kTelecomWavelengthNm}, fiber, mode,
                                                theta) *
                       rs::coupling::facet_transmission(fiber);
    const double hcf = rs::coupling::effective_coupling(rs::channel::MediumKind::HCF, theta).value_or(nan);
    if (c.format == "csv") {
      o.stream() << rs::sweep::format_double(theta) << ',' << rs::sweep::format_double(smf) << ','
                 << rs::sweep::format_double(hcf) << '\n';
    } else {
      rows.push_back({{"theta_rad", theta}, {"eta_smf_1550", smf}, {"eta_constants_hcf", number(hcf)}});
    }
  }
  if (c.format == "json") o.stream() << rows.dump(2) << '\n';
}

void run_chain(const Common& c, bool trace, bool with_oracle, std::uint64_t trials, std::uint64_t seed) {
  const auto cfg = chain_config(c);
  const auto ev = rs::protocol::evaluate_chain_detailed(cfg);
  const auto& p = ev.point;
  json out = {{"skr_pcu", p.skr_pcu},
              {"secret_bits_per_burst", p.secret_bits_per_burst},
              {"expected_end_pairs", p.expected_end_pairs},
              {"completion_prob", p.completion_prob},
              {"key_fraction", p.key_fraction},
              {"pi0", p.pi0},
              {"mass_defect", p.mass_defect},
              {"end_state", state_json(p.end_state)},
              {"wavelength_nm", p.wavelength_nm},
              {"l0_km", p.l0_km},
              {"depth", p.depth},
              {"multiplexing", p.multiplexing},
              {"swaps", p.ops.swaps},
              {"distillations", p.ops.distillations},
              {"two_qubit_gates", p.ops.two_qubit_gates},
              {"measurements", p.ops.measurements},
              {"ops_per_secret_bit", number(rs::metrics::ops_per_secret_bit(p).value_or(INFINITY))},
              {"diagnostic", p.diagnostic}};
  if (trace) {
    json levels = json::array();
    for (const auto& l : ev.trace.levels) {
      levels.push_back({{"level", l.level},
                        {"pre", state_json(l.pre)},
                        {"distill", l.distill},
                        {"distill_success", l.distill_success},
                        {"post", state_json(l.post)},
                        {"fidelity", l.fidelity},
                        {"wait_time_s", l.wait_time_s},
                        {"capacity", l.capacity}});
    }
    out["trace"] = levels;
  }
  if (with_oracle) {
    rs::oracle::MonteCarloConfig mc{trials, seed, resolve_threads(c.threads)};
    const auto est = rs::oracle::mc_chain(cfg, mc);
    out["oracle"] = {{"trials", trials},
                     {"seed", seed},
                     {"skr_pcu", est.skr_pcu.mean},
                     {"skr_pcu_se", est.skr_pcu.se},
                     {"completion_prob", est.mc.completion.mean},
                     {"completion_prob_se", est.mc.completion.se},
                     {"end_pairs", est.mc.end_pairs.mean},
                     {"end_pairs_se", est.mc.end_pairs.se},
                     {"swaps", est.mc.swaps.mean},
                     {"distillations", est.mc.distillations.mean}};
  }
  Output o(c.out_path);
  o.stream() << out.dump(2) << '\n';
}

void emit_sweep(const rs::sweep::SweepSpec& spec, const Common& c) {
  const auto result = rs::sweep::run_sweep(spec, resolve_threads(c.threads));
  const std::string path = !c.out_path.empty() ? c.out_path : spec.output_path;
  {
    Output o(path);
    if (c.format == "json") {
      rs::sweep::write_json(result, o.stream());
    } else {
      rs::sweep::write_csv(result, o.stream());
    }
  }
  // HCF-over-SMF comparison table next to the main output.
  if (path.empty() || result.kind != rs::sweep::SweepKind::Chain) return;
  bool has_hcf = false, has_smf = false;
  for (const auto& v : spec.variants) {
    has_hcf |= v.label() == "HCF";
    has_smf |= v.label() == "SMF";
  }
  if (!has_hcf || !has_smf) return;
  std::string stem = path;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  Output ratio(stem + ".ratio.csv");
  rs::sweep::write_ratio_csv(rs::sweep::paired_ratios(result.rows, "HCF", "SMF"), ratio.stream());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplexed quantum repeater chains over silica and hollow-core fiber"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON configuration file");
    sub->add_option("--out", common.out_path, "Output path (default: stdout)");
    sub->add_option("--threads", common.threads, "Worker threads (default: $THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* link = app.add_subcommand("link", "Elementary-link budget and wavelength choice");
  add_common(link);

  CoupleOptions couple_opt;
  auto* couple = app.add_subcommand("couple", "Facet coupling efficiency against tilt angle");
  add_common(couple);
  couple->add_option("--theta-max", couple_opt.theta_max, "Largest tilt in radians");
  couple->add_option("--steps", couple_opt.steps, "Number of tilt samples");
  couple->add_option("--core-radius", couple_opt.core_radius_um, "SMF core radius in um")->check(CLI::PositiveNumber);
  couple->add_option("--na", couple_opt.na, "SMF numerical aperture (default: cutoff at 1550 nm)");
  couple->add_flag("--bare", couple_opt.bare, "No anti-reflection coating on the SMF facet");

  bool trace = false, with_oracle = false;
  std::uint64_t trials = 100000, seed = 1;
  auto* chain = app.add_subcommand("chain", "Evaluate one repeater chain");
  add_common(chain);
  chain->add_flag("--trace", trace, "Include the per-level schedule");
  chain->add_flag("--oracle", with_oracle, "Add a Monte-Carlo estimate alongside the analytic result");
  chain->add_option("--trials", trials, "Monte-Carlo bursts for --oracle");
  chain->add_option("--seed", seed, "Monte-Carlo seed for --oracle");

  auto* sweep = app.add_subcommand("sweep", "Run a sweep from a JSON config");
  add_common(sweep);

  std::string figure_name;
  auto* figure = app.add_subcommand("figure", "Run a built-in figure preset");
  add_common(figure);
  figure->add_option("name", figure_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*link) {
      run_link(common);
    } else if (*couple) {
      run_couple(common, couple_opt);
    } else if (*chain) {
      run_chain(common, trace, with_oracle, trials, seed);
    } else if (*sweep) {
      if (common.config_path.empty()) throw rs::ConfigError("sweep: --config is required");
      emit_sweep(rs::sweep::load_spec(common.config_path), common);
    } else if (*figure) {
      auto spec = rs::sweep::figure_preset(figure_name);
      if (!common.config_path.empty()) throw rs::ConfigError("figure: use sweep with a preset key to customize");
      emit_sweep(spec, common);
    }
  } catch (const rs::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericExit;
  } catch (const rs::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigExit;
  }
  return 0;
}
