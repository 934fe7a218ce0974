#pragma once

// JSON ingestion for single-chain configurations. Sweep specs are read by
// sweep::spec_from_json, which shares the same key conventions.

#include <string>
#include <string_view>

#include "repeaterscope/protocol.hpp"

namespace repeaterscope::config {

/// Keys: medium, profiles, fixed_wavelength_nm, eta_hardware, conv_eff, l0_km,
/// eps_g, xi (default eps_g / 4), t2_s, depth, multiplexing, f_th,
/// normalization, reset_rule, cost. Missing keys keep their defaults; unknown
/// keys raise ConfigError.
protocol::ProtocolConfig protocol_from_json(std::string_view text);

/// Whole file as a string; ConfigError if it cannot be read.
std::string read_file(const std::string& path);

}  // namespace repeaterscope::config
