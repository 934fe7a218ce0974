#include "repeaterscope/coupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "repeaterscope/errors.hpp"
#include "repeaterscope/quadrature.hpp"

namespace repeaterscope::coupling {

namespace {

constexpr double kQuadratureRelTol = 1e-11;
constexpr double kTailFraction = 1e-16;

double wavenumber_per_um(double wavelength_nm) {
  return 2.0 * std::numbers::pi / (wavelength_nm * 1e-3);
}

double j0(double x) { return std::cyl_bessel_j(0.0, x); }
double j1(double x) { return std::cyl_bessel_j(1.0, x); }
double k0(double x) { return std::cyl_bessel_k(0.0, x); }
double k1(double x) { return std::cyl_bessel_k(1.0, x); }

double characteristic_residual(double u, double v) {
  const double w = std::sqrt(std::max(0.0, v * v - u * u));
  const double core = u * j1(u) / j0(u);
  // W K1(W)/K0(W) -> 0 as W -> 0.
  const double cladding = w > 0.0 ? w * k1(w) / k0(w) : 0.0;
  return core - cladding;
}

// Radius beyond which |psi_fib|^2 r has fallen below kTailFraction of its peak.
double truncation_radius(const StepIndexFiber& fiber, const ModeSolution& mode) {
  const double a = fiber.core_radius_um;
  auto density = [&](double r) {
    const double f = mode_field(r, fiber, mode);
    return f * f * r;
  };
  double peak = 0.0;
  for (int i = 1; i <= 400; ++i) peak = std::max(peak, density(3.0 * a * i / 400.0));
  double r = a;
  while (density(r) > kTailFraction * peak) {
    r += 0.5 * a;
    if (r > 2000.0 * a) throw NumericError("overlap: mode tail does not decay (W too small)");
  }
  return r;
}

double radial_integral(const std::function<double(double)>& f, double a, double r_max) {
  return numeric::integrate(f, 0.0, a, kQuadratureRelTol).value +
         numeric::integrate(f, a, r_max, kQuadratureRelTol).value;
}

double overlap_with_kernel(const GaussianBeam& beam, const StepIndexFiber& fiber,
                           const ModeSolution& mode, double kernel_scale) {
  if (!(beam.waist_um > 0.0)) throw DomainError("overlap: beam waist must be positive");
  const double a = fiber.core_radius_um;
  const double r_max = truncation_radius(fiber, mode);
  const double w2 = beam.waist_um * beam.waist_um;

  const double cross = radial_integral(
      [&](double r) {
        return mode_field(r, fiber, mode) * std::exp(-r * r / w2) * j0(kernel_scale * r) * r;
      },
      a, r_max);
  const double fiber_power = radial_integral(
      [&](double r) {
        const double f = mode_field(r, fiber, mode);
        return f * f * r;
      },
      a, r_max);
  // Integral of exp(-2 r^2 / w^2) r dr over [0, inf).
  const double beam_power = 0.25 * w2;
  return cross * cross / (fiber_power * beam_power);
}

}  // namespace

double StepIndexFiber::numerical_aperture() const { return std::sqrt(n1 * n1 - n2 * n2); }

void StepIndexFiber::validate() const {
  if (!(core_radius_um > 0.0)) throw DomainError("fiber: core radius must be positive");
  if (!(n2 >= 1.0 && n1 > n2)) throw DomainError("fiber: indices must satisfy n1 > n2 >= 1");
  const double na = numerical_aperture();
  if (!(na > 0.0 && na < 1.0)) throw DomainError("fiber: numerical aperture must lie in (0,1)");
}

StepIndexFiber StepIndexFiber::near_cutoff(double wavelength_nm, double core_radius_um, double n2,
                                           bool ar_coated) {
  const double na = kSingleModeCutoff * wavelength_nm * 1e-3 / (2.0 * std::numbers::pi * core_radius_um);
  StepIndexFiber f{core_radius_um, std::sqrt(n2 * n2 + na * na), n2, ar_coated};
  f.validate();
  return f;
}

StepIndexFiber StepIndexFiber::smf28_like(bool ar_coated) {
  constexpr double na = 0.117;
  constexpr double n2 = 1.444;
  StepIndexFiber f{4.1, std::sqrt(n2 * n2 + na * na), n2, ar_coated};
  f.validate();
  return f;
}

double normalized_frequency(const StepIndexFiber& fiber, double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw DomainError("normalized_frequency: wavelength must be positive");
  return wavenumber_per_um(wavelength_nm) * fiber.core_radius_um * fiber.numerical_aperture();
}

ModeSolution solve_characteristic(double v) {
  if (!(v > 0.0)) throw DomainError("solve_characteristic: V must be positive");
  double lo = 0.0;
  double hi = std::min(v, kFirstJ0Zero * (1.0 - 1e-14));
  // f(0+) = -W K1/K0 < 0 and f grows through the root toward the bracket top.
  double f_lo = characteristic_residual(lo + 1e-300, v);
  double f_hi = characteristic_residual(hi, v);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw NumericError("solve_characteristic: no sign change for V = " + std::to_string(v));
  }
  double u = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    u = 0.5 * (lo + hi);
    const double f = characteristic_residual(u, v);
    if (std::abs(f) < 1e-13 || hi - lo < 1e-15 * v) break;
    if (f < 0.0) {
      lo = u;
    } else {
      hi = u;
    }
  }
  if (std::abs(characteristic_residual(u, v)) >= 1e-10) {
    throw NumericError("solve_characteristic: bisection did not reach |f| < 1e-10");
  }
  return {v, u, std::sqrt(std::max(0.0, v * v - u * u))};
}

ModeSolution solve_mode(const StepIndexFiber& fiber, double wavelength_nm) {
  fiber.validate();
  ModeSolution mode = solve_characteristic(normalized_frequency(fiber, wavelength_nm));
  const double k = wavenumber_per_um(wavelength_nm);
  const double ua = mode.u / fiber.core_radius_um;
  mode.beta_per_um = std::sqrt(fiber.n1 * fiber.n1 * k * k - ua * ua);
  return mode;
}

double mode_field(double r_um, const StepIndexFiber& fiber, const ModeSolution& mode) {
  if (!(r_um >= 0.0)) throw DomainError("mode_field: radius must be non-negative");
  const double x = r_um / fiber.core_radius_um;
  if (x <= 1.0) return j0(mode.u * x);
  return j0(mode.u) / k0(mode.w) * k0(mode.w * x);
}

double overlap_eta(const GaussianBeam& beam, const StepIndexFiber& fiber, const ModeSolution& mode) {
  return overlap_with_kernel(beam, fiber, mode, 0.0);
}

double tilted_eta(const GaussianBeam& beam, const StepIndexFiber& fiber, const ModeSolution& mode,
                  double theta_rad) {
  if (!(std::abs(theta_rad) < 0.5)) throw DomainError("tilted_eta: |theta| must be below 0.5 rad");
  const double scale = wavenumber_per_um(beam.wavelength_nm) * std::sin(std::abs(theta_rad));
  return overlap_with_kernel(beam, fiber, mode, scale);
}

WaistOptimum optimize_waist(const StepIndexFiber& fiber, const ModeSolution& mode, double wavelength_nm) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double a = fiber.core_radius_um;
  double lo = 0.2 * a;
  double hi = 5.0 * a;
  auto eta = [&](double w) { return overlap_eta({w, wavelength_nm}, fiber, mode); };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eta(x1);
  double f2 = eta(x2);
  while (hi - lo > 1e-6 * 0.5 * (lo + hi)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eta(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eta(x1);
    }
  }
  const double w = 0.5 * (lo + hi);
  return {w, eta(w)};
}

double fresnel_transmission(double n0, double n1) {
  if (!(n0 >= 1.0 && n1 >= 1.0)) throw DomainError("fresnel_transmission: indices must be >= 1");
  const double r = (n1 - n0) / (n1 + n0);
  return 1.0 - r * r;
}

double facet_transmission(const StepIndexFiber& fiber, double n0) {
  return fiber.ar_coated ? 1.0 : fresnel_transmission(n0, fiber.n1);
}

double effective_coupling(const StepIndexFiber& fiber, double wavelength_nm, double theta_tol) {
  if (!(theta_tol >= 0.0)) throw DomainError("effective_coupling: tolerance must be non-negative");
  const ModeSolution mode = solve_mode(fiber, wavelength_nm);
  const WaistOptimum best = optimize_waist(fiber, mode, wavelength_nm);
  const double eta = theta_tol == 0.0
                         ? best.eta
                         : tilted_eta({best.waist_um, wavelength_nm}, fiber, mode, theta_tol);
  return eta * facet_transmission(fiber);
}

std::optional<double> effective_coupling(channel::MediumKind medium, double theta_tol) {
  if (!(theta_tol >= 0.0)) throw DomainError("effective_coupling: tolerance must be non-negative");
  if (medium == channel::MediumKind::SMF) {
    return effective_coupling(StepIndexFiber::near_cutoff(channel::kTelecomWavelengthNm),
                              channel::kTelecomWavelengthNm, theta_tol);
  }
  // Anti-resonant fiber: optimum overlap at normal incidence and the value at
  // the design angle tolerance, linearly interpolated in between.
  constexpr std::array<std::array<double, 2>, 2> table = {{{0.0, 0.98}, {kAngleTolerance, 0.79}}};
  if (theta_tol > table.back()[0]) return std::nullopt;
  const double t = theta_tol / table.back()[0];
  return table[0][1] + t * (table[1][1] - table[0][1]);
}

}  // namespace repeaterscope::coupling
