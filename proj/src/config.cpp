#include "repeaterscope/config.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "repeaterscope/errors.hpp"
#include "repeaterscope/sweep.hpp"

namespace repeaterscope {

namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

// A scalar is accepted wherever a list is expected.
template <typename T>
void read_list(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

channel::MediumProfile read_profile(channel::MediumKind kind, const json& j) {
  reject_unknown(j, {"att_length_km", "signal_velocity_km_s", "coupling_mem_fiber", "allowed_wavelengths_nm"},
                 "profile");
  channel::MediumProfile p = channel::MediumProfile::preset(kind);
  if (j.contains("att_length_km")) {
    const json& att = j.at("att_length_km");
    if (!att.is_object()) throw ConfigError("profile: att_length_km must map wavelength to km");
    p.att_length_km.clear();
    for (const auto& [nm, km] : att.items()) {
      try {
        p.att_length_km[std::stoi(nm)] = km.get<double>();
      } catch (const std::exception&) {
        throw ConfigError("profile: bad attenuation entry '" + nm + "'");
      }
    }
  }
  read(j, "signal_velocity_km_s", p.signal_velocity_km_s);
  read(j, "coupling_mem_fiber", p.coupling_mem_fiber);
  if (j.contains("allowed_wavelengths_nm")) {
    std::vector<int> nm;
    read_list(j, "allowed_wavelengths_nm", nm);
    p.allowed_wavelengths_nm = {nm.begin(), nm.end()};
  }
  p.validate();
  return p;
}

std::map<channel::MediumKind, channel::MediumProfile> read_profiles(const json& j) {
  std::map<channel::MediumKind, channel::MediumProfile> out;
  if (!j.contains("profiles")) return out;
  const json& all = j.at("profiles");
  if (!all.is_object()) throw ConfigError("config: profiles must be an object keyed by medium");
  for (const auto& [name, body] : all.items()) {
    const channel::MediumKind kind = channel::medium_from_string(name);
    out.emplace(kind, read_profile(kind, body));
  }
  return out;
}

metrics::CostModel read_cost(const json& j) {
  metrics::CostModel c;
  if (!j.contains("cost")) return c;
  const json& body = j.at("cost");
  reject_unknown(body, {"gates_per_swap", "measurements_per_swap", "gates_per_distill", "measurements_per_distill"},
                 "cost");
  read(body, "gates_per_swap", c.gates_per_swap);
  read(body, "measurements_per_swap", c.measurements_per_swap);
  read(body, "gates_per_distill", c.gates_per_distill);
  read(body, "measurements_per_distill", c.measurements_per_distill);
  c.validate();
  return c;
}

protocol::SkrNormalization read_normalization(const json& j) {
  std::string name = "per_channel_use";
  read(j, "normalization", name);
  if (name == "per_channel_use") return protocol::SkrNormalization::PerChannelUse;
  if (name == "per_link_channel_use") return protocol::SkrNormalization::PerLinkChannelUse;
  throw ConfigError("config: normalization must be per_channel_use or per_link_channel_use");
}

}  // namespace

namespace config {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

protocol::ProtocolConfig protocol_from_json(std::string_view text) {
  const json j = parse(text);
  reject_unknown(j,
                 {"medium", "profiles", "fixed_wavelength_nm", "eta_hardware", "conv_eff", "l0_km", "eps_g", "xi",
                  "t2_s", "depth", "multiplexing", "f_th", "normalization", "reset_rule", "cost"},
                 "config");
  protocol::ProtocolConfig c;
  std::string medium = "HCF";
  read(j, "medium", medium);
  const auto kind = channel::medium_from_string(medium);
  const auto profiles = read_profiles(j);
  auto it = profiles.find(kind);
  c.medium = it != profiles.end() ? it->second : channel::MediumProfile::preset(kind);
  if (j.contains("fixed_wavelength_nm")) {
    int nm = 0;
    read(j, "fixed_wavelength_nm", nm);
    c.fixed_wavelength_nm = nm;
  }
  read(j, "eta_hardware", c.budget.eta_hardware);
  read(j, "conv_eff", c.budget.conv_eff);
  read(j, "l0_km", c.budget.l0_km);
  double eps_g = 1e-3;
  read(j, "eps_g", eps_g);
  double t2 = 1.0;
  read(j, "t2_s", t2);
  double xi = eps_g / 4.0;
  read(j, "xi", xi);
  c.noise = states::NoiseParams{eps_g, xi, t2};
  read(j, "depth", c.depth);
  read(j, "multiplexing", c.multiplexing);
  read(j, "f_th", c.f_th);
  c.normalization = read_normalization(j);
  std::string rule = "consistent";
  read(j, "reset_rule", rule);
  if (rule == "consistent") {
    c.reset_rule = cascade::ResetRule::Consistent;
  } else if (rule == "literal") {
    c.reset_rule = cascade::ResetRule::Literal;
  } else {
    throw ConfigError("config: reset_rule must be consistent or literal");
  }
  c.cost = read_cost(j);
  try {
    c.noise.validate();
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace config

namespace sweep {

SweepSpec spec_from_json(std::string_view text) {
  const json j = parse(text);
  reject_unknown(j,
                 {"preset", "kind", "media", "profiles", "total_distance_km", "l0_km", "conv_eff", "eta_hardware",
                  "t2_s", "eps_g", "f_th", "multiplexing", "n_range", "normalization", "cost", "output_path"},
                 "sweep");
  SweepSpec s;
  if (j.contains("preset")) {
    std::string name;
    read(j, "preset", name);
    s = figure_preset(name);
  }
  if (j.contains("kind")) {
    std::string kind;
    read(j, "kind", kind);
    if (kind == "chain") {
      s.kind = SweepKind::Chain;
    } else if (kind == "wavelength_map") {
      s.kind = SweepKind::WavelengthMap;
    } else {
      throw ConfigError("sweep: kind must be chain or wavelength_map");
    }
  }
  if (j.contains("media")) {
    std::vector<std::string> labels;
    read_list(j, "media", labels);
    s.variants.clear();
    for (const auto& l : labels) s.variants.push_back(ChainVariant::parse(l));
  }
  for (auto& [kind, prof] : read_profiles(j)) s.profiles[kind] = prof;
  read_list(j, "total_distance_km", s.total_distance_km);
  read_list(j, "l0_km", s.l0_km);
  read_list(j, "conv_eff", s.conv_eff);
  read_list(j, "eta_hardware", s.eta_hardware);
  read_list(j, "t2_s", s.t2_s);
  read_list(j, "eps_g", s.eps_g);
  read(j, "f_th", s.f_th);
  read(j, "multiplexing", s.multiplexing);
  read_list(j, "n_range", s.depth_range);
  if (j.contains("normalization")) s.normalization = read_normalization(j);
  if (j.contains("cost")) s.cost = read_cost(j);
  read(j, "output_path", s.output_path);
  s.validate();
  return s;
}

SweepSpec load_spec(const std::string& path) { return spec_from_json(config::read_file(path)); }

namespace {

// JSON has no inf/nan; they are written as strings to keep rows lossless.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

void write_json(const SweepResult& result, std::ostream& os) {
  json rows = json::array();
  if (result.kind == SweepKind::WavelengthMap) {
    for (const auto& r : result.map_rows) {
      rows.push_back({{"medium", r.medium},
                      {"l0_km", number(r.l0_km)},
                      {"conv_eff", number(r.conv_eff)},
                      {"eta_hardware", number(r.eta_hardware)},
                      {"pi0_780", number(r.pi0_780)},
                      {"pi0_1550", number(r.pi0_1550)},
                      {"wavelength_used", r.wavelength_used},
                      {"conv_threshold", number(r.conv_threshold)}});
    }
  } else {
    for (const auto& r : result.rows) {
      rows.push_back({{"medium", r.medium},
                      {"total_distance_km", number(r.total_distance_km)},
                      {"conv_eff", number(r.conv_eff)},
                      {"eta_hardware", number(r.eta_hardware)},
                      {"t2_s", number(r.t2_s)},
                      {"eps_g", number(r.eps_g)},
                      {"f_th", number(r.f_th)},
                      {"multiplexing", r.multiplexing},
                      {"wavelength_used", r.wavelength_used},
                      {"best_n", r.best_n},
                      {"best_l0", number(r.best_l0)},
                      {"skr_pcu", number(r.skr_pcu)},
                      {"completion_prob", number(r.completion_prob)},
                      {"expected_end_pairs", number(r.expected_end_pairs)},
                      {"key_fraction", number(r.key_fraction)},
                      {"ops_per_secret_bit", number(r.ops_per_secret_bit)},
                      {"nodes_per_secret_bit", number(r.nodes_per_secret_bit)},
                      {"mass_defect", number(r.mass_defect)}});
    }
  }
  os << rows.dump(2) << '\n';
}

}  // namespace sweep

}  // namespace repeaterscope
