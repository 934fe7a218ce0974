#include "repeaterscope/channel.hpp"

#include <cmath>
#include <string>

#include "repeaterscope/errors.hpp"

namespace repeaterscope::channel {

std::string_view to_string(MediumKind kind) {
  switch (kind) {
    case MediumKind::SMF:
      return "SMF";
    case MediumKind::HCF:
      return "HCF";
  }
  return "?";
}

MediumKind medium_from_string(std::string_view name) {
  if (name == "SMF" || name == "smf") return MediumKind::SMF;
  if (name == "HCF" || name == "hcf") return MediumKind::HCF;
  throw ConfigError("unknown medium '" + std::string(name) + "' (expected SMF or HCF)");
}

double MediumProfile::attenuation_length(int wavelength_nm) const {
  auto it = att_length_km.find(wavelength_nm);
  if (!allows(wavelength_nm) || it == att_length_km.end()) {
    throw UnsupportedWavelength(std::string(name()) + " does not support " +
                                std::to_string(wavelength_nm) + " nm");
  }
  return it->second;
}

void MediumProfile::validate() const {
  if (allowed_wavelengths_nm.empty()) {
    throw ConfigError(std::string(name()) + ": no allowed wavelengths");
  }
  for (int nm : allowed_wavelengths_nm) {
    auto it = att_length_km.find(nm);
    if (it == att_length_km.end()) {
      throw ConfigError(std::string(name()) + ": no attenuation length for " +
                        std::to_string(nm) + " nm");
    }
    if (!(it->second > 0.0)) throw ConfigError(std::string(name()) + ": attenuation length must be positive");
  }
  if (!(coupling_mem_fiber >= 0.0 && coupling_mem_fiber <= 1.0)) {
    throw ConfigError(std::string(name()) + ": coupling must lie in [0,1]");
  }
  if (!(signal_velocity_km_s > 0.0)) throw ConfigError(std::string(name()) + ": signal velocity must be positive");
}

MediumProfile MediumProfile::smf() {
  MediumProfile m;
  m.kind = MediumKind::SMF;
  m.att_length_km = {{kTelecomWavelengthNm, 28.95}};
  m.coupling_mem_fiber = 0.83;
  m.allowed_wavelengths_nm = {kTelecomWavelengthNm};
  return m;
}

MediumProfile MediumProfile::hcf() {
  MediumProfile m;
  m.kind = MediumKind::HCF;
  m.att_length_km = {{kMemoryWavelengthNm, 24.127}, {kTelecomWavelengthNm, 78.96}};
  m.coupling_mem_fiber = 0.79;
  m.allowed_wavelengths_nm = {kMemoryWavelengthNm, kTelecomWavelengthNm};
  return m;
}

MediumProfile MediumProfile::preset(MediumKind kind) {
  return kind == MediumKind::SMF ? smf() : hcf();
}

void LinkBudget::validate() const {
  if (!(eta_hardware >= 0.0 && eta_hardware <= 1.0)) throw ConfigError("eta_hardware must lie in [0,1]");
  if (!(conv_eff >= 0.0 && conv_eff <= 1.0)) throw ConfigError("conv_eff must lie in [0,1]");
  if (!(l0_km > 0.0)) throw ConfigError("l0 must be positive");
}

double eta_c(const MediumProfile& medium, const LinkBudget& budget, int wavelength_nm) {
  if (!medium.allows(wavelength_nm)) {
    throw UnsupportedWavelength(std::string(medium.name()) + " does not support " +
                                std::to_string(wavelength_nm) + " nm");
  }
  const double base = budget.eta_hardware * medium.coupling_mem_fiber;
  return wavelength_nm == kMemoryWavelengthNm ? base : base * budget.conv_eff;
}

double elementary_success(const MediumProfile& medium, const LinkBudget& budget, int wavelength_nm) {
  const double eta = eta_c(medium, budget, wavelength_nm);
  return 0.5 * eta * eta * std::exp(-budget.l0_km / medium.attenuation_length(wavelength_nm));
}

WavelengthChoice select_wavelength(const MediumProfile& medium, const LinkBudget& budget) {
  if (medium.allowed_wavelengths_nm.empty()) {
    throw ConfigError(std::string(medium.name()) + ": no allowed wavelengths");
  }
  WavelengthChoice best{0, -1.0};
  for (int nm : medium.allowed_wavelengths_nm) {
    const double pi0 = elementary_success(medium, budget, nm);
    const bool tie_to_telecom = pi0 == best.pi0 && nm == kTelecomWavelengthNm;
    if (pi0 > best.pi0 || tie_to_telecom) best = {nm, pi0};
  }
  return best;
}

double conversion_threshold(const MediumProfile& medium, double l0_km) {
  if (!medium.allows(kMemoryWavelengthNm) || !medium.allows(kTelecomWavelengthNm)) {
    throw UnsupportedWavelength(std::string(medium.name()) +
                                " must support both 780 nm and 1550 nm for a conversion threshold");
  }
  if (!(l0_km >= 0.0)) throw DomainError("conversion_threshold: l0 must be non-negative");
  const double mem = medium.attenuation_length(kMemoryWavelengthNm);
  const double tel = medium.attenuation_length(kTelecomWavelengthNm);
  return std::exp(-0.5 * l0_km * (1.0 / mem - 1.0 / tel));
}

}  // namespace repeaterscope::channel
