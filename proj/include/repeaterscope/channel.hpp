#pragma once

// Fiber media, link budgets and the elementary-link success probability.

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace repeaterscope::channel {

inline constexpr int kMemoryWavelengthNm = 780;
inline constexpr int kTelecomWavelengthNm = 1550;

enum class MediumKind { SMF, HCF };

std::string_view to_string(MediumKind kind);
MediumKind medium_from_string(std::string_view name);

struct MediumProfile {
  MediumKind kind = MediumKind::SMF;
  std::map<int, double> att_length_km;  // wavelength (nm) -> attenuation length
  double signal_velocity_km_s = 2.0e5;
  double coupling_mem_fiber = 1.0;
  std::set<int> allowed_wavelengths_nm;

  std::string_view name() const { return to_string(kind); }
  bool allows(int wavelength_nm) const { return allowed_wavelengths_nm.count(wavelength_nm) > 0; }
  double attenuation_length(int wavelength_nm) const;
  void validate() const;

  /// Silica SMF, telecom band only: L_att(1550) = 28.95 km, coupling 0.83.
  static MediumProfile smf();
  /// Anti-resonant HCF: L_att(780) = 24.127 km, L_att(1550) = 78.96 km, coupling 0.79.
  static MediumProfile hcf();
  static MediumProfile preset(MediumKind kind);
};

struct LinkBudget {
  double eta_hardware = 1.0;
  double conv_eff = 1.0;  // product of both conversion stages
  double l0_km = 1.0;

  void validate() const;
};

/// Effective photon coupling efficiency. Conversion losses apply to every
/// wavelength other than the memory-native one.
double eta_c(const MediumProfile& medium, const LinkBudget& budget, int wavelength_nm);

/// pi0 = 1/2 eta_c^2 exp(-L0 / L_att).
double elementary_success(const MediumProfile& medium, const LinkBudget& budget, int wavelength_nm);

struct WavelengthChoice {
  int wavelength_nm;
  double pi0;
};

/// Allowed wavelength maximizing pi0; ties go to 1550 nm.
WavelengthChoice select_wavelength(const MediumProfile& medium, const LinkBudget& budget);

/// Conversion efficiency at which memory-native and telecom transmission give
/// equal pi0 for spacing l0. Below it the memory wavelength wins.
double conversion_threshold(const MediumProfile& medium, double l0_km);

}  // namespace repeaterscope::channel
