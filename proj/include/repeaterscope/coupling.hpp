#pragma once

// Scalar step-index fiber modes and free-space Gaussian beam coupling.
//
// Lengths are in micrometres unless a name says otherwise; wavelengths are
// passed in nanometres.

#include <limits>
#include <optional>

#include "repeaterscope/channel.hpp"

namespace repeaterscope::coupling {

inline constexpr double kFirstJ0Zero = 2.404825557695773;
inline constexpr double kSingleModeCutoff = 2.405;
inline constexpr double kSilicaIndex = 1.45;
inline constexpr double kAngleTolerance = 0.025;  // rad

struct StepIndexFiber {
  double core_radius_um = 5.0;
  double n1 = 1.45;
  double n2 = 1.444;
  bool ar_coated = false;

  double numerical_aperture() const;
  void validate() const;

  /// Fiber whose normalized frequency equals the single-mode cutoff at the
  /// given wavelength. The index contrast is derived from the core radius.
  static StepIndexFiber near_cutoff(double wavelength_nm, double core_radius_um = 5.0,
                                    double n2 = 1.444, bool ar_coated = true);
  /// SMF-28-like geometry: a = 4.1 um, NA = 0.117.
  static StepIndexFiber smf28_like(bool ar_coated = false);
};

struct ModeSolution {
  double v = 0.0;
  double u = 0.0;
  double w = 0.0;
  double beta_per_um = std::numeric_limits<double>::quiet_NaN();
};

struct GaussianBeam {
  double waist_um = 1.0;  // 1/e field radius at the facet
  double wavelength_nm = 1550.0;
};

/// V = (2 pi a / lambda) NA.
double normalized_frequency(const StepIndexFiber& fiber, double wavelength_nm);
inline bool is_multimode(double v) { return v >= kSingleModeCutoff; }

/// Fundamental-mode root of U J1(U)/J0(U) = W K1(W)/K0(W) with U^2 + W^2 = V^2.
ModeSolution solve_characteristic(double v);

/// Root for a concrete fiber and wavelength, including the propagation constant.
ModeSolution solve_mode(const StepIndexFiber& fiber, double wavelength_nm);

/// LP01 field: J0(U r/a) in the core, J0(U)/K0(W) K0(W r/a) in the cladding.
double mode_field(double r_um, const StepIndexFiber& fiber, const ModeSolution& mode);

/// Power overlap of a Gaussian beam at its waist with the fiber mode.
double overlap_eta(const GaussianBeam& beam, const StepIndexFiber& fiber, const ModeSolution& mode);

/// Overlap for a beam tilted by theta in the x-z plane. The azimuthal integral
/// of the transverse phase ramp reduces to a J0(k0 r sin(theta)) kernel.
double tilted_eta(const GaussianBeam& beam, const StepIndexFiber& fiber, const ModeSolution& mode,
                  double theta_rad);

struct WaistOptimum {
  double waist_um;
  double eta;
};

/// Golden-section search for the best waist over [0.2a, 5a].
WaistOptimum optimize_waist(const StepIndexFiber& fiber, const ModeSolution& mode,
                            double wavelength_nm = 1550.0);

/// Normal-incidence power transmission 1 - ((n1 - n0)/(n1 + n0))^2.
double fresnel_transmission(double n0, double n1);
/// Facet transmission from air; 1 for an anti-reflection coated facet.
double facet_transmission(const StepIndexFiber& fiber, double n0 = 1.0);

/// Facet efficiency of a step-index fiber at angular tolerance theta_tol:
/// optimized-waist tilt overlap times facet transmission.
double effective_coupling(const StepIndexFiber& fiber, double wavelength_nm, double theta_tol);

/// Medium-level facet efficiency. SMF uses the near-cutoff geometry at
/// 1550 nm; HCF uses tabulated anti-resonant fiber values, because its vector
/// mode is not solved here. Returns nullopt outside the HCF table.
std::optional<double> effective_coupling(channel::MediumKind medium, double theta_tol);

}  // namespace repeaterscope::coupling
