#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "repeaterscope/coupling.hpp"
#include "repeaterscope/errors.hpp"

using namespace repeaterscope;
using namespace repeaterscope::coupling;

namespace {

// x, J0, J1, K0, K1 from 40-digit arbitrary-precision evaluation.
constexpr std::array<std::array<double, 5>, 8> kBessel = {{
    {0.1, 0.997501562066040032, 0.049937526036242000321, 2.4270690247020165578, 9.8538447808706055744},
    {0.5, 0.93846980724081290423, 0.24226845767487388638, 0.92441907122766586178, 1.6564411200033008937},
    {1.0, 0.76519768655796655145, 0.44005058574493351596, 0.42102443824070833334, 0.60190723019723457474},
    {1.645, 0.42966261627070757801, 0.57394568866684132177, 0.17746068989339668916, 0.22594535118553608885},
    {2.405, -0.000090558000773044694793, 0.51910983397075588093, 0.069800028179372850353, 0.083201096538685533855},
    {3.0, -0.26005195490193343762, 0.33905895852593645893, 0.034739504386279248072, 0.040156431128194184377},
    {5.5, -0.006843869417819196824, -0.34143821542904335018, 0.0021387085659502874316, 0.0023255690088490051552},
    {10.0, -0.2459357644513483352, 0.04347274616886143667, 0.000017780062316167651811,
     0.000018648773453825584597},
}};

// V, U, W of the fundamental mode from arbitrary-precision root finding.
constexpr std::array<std::array<double, 3>, 4> kRoots = {{
    {1.0, 0.97931076679629747632, 0.20236210622754414387},
    {1.5, 1.3168874333493886883, 0.71819738783043437427},
    {2.0, 1.5281840299453826384, 1.2902145444149549888},
    {2.405, 1.6465720162674369823, 1.7529476875380469556},
}};

// A fiber whose normalized frequency at 1550 nm is exactly `v`.
StepIndexFiber fiber_with_v(double v) {
  return StepIndexFiber::near_cutoff(1550.0 * v / kSingleModeCutoff, 5.0);
}

}  // namespace

TEST_CASE("standard-library Bessel functions match reference values") {
  for (const auto& row : kBessel) {
    const double x = row[0];
    CHECK(std::abs(std::cyl_bessel_j(0.0, x) - row[1]) < 1e-12);
    CHECK(std::abs(std::cyl_bessel_j(1.0, x) - row[2]) < 1e-12);
    CHECK(std::abs(std::cyl_bessel_k(0.0, x) - row[3]) < 1e-12 * std::max(1.0, row[3]));
    CHECK(std::abs(std::cyl_bessel_k(1.0, x) - row[4]) < 1e-12 * std::max(1.0, row[4]));
  }
}

TEST_CASE("characteristic equation roots") {
  for (const auto& row : kRoots) {
    const auto m = solve_characteristic(row[0]);
    CHECK(std::abs(m.u - row[1]) < 1e-10);
    CHECK(std::abs(m.w - row[2]) < 1e-10);
    CHECK(std::abs(m.u * m.u + m.w * m.w - m.v * m.v) < 1e-9);
  }
  CHECK_THROWS_AS(solve_characteristic(0.0), DomainError);
}

TEST_CASE("characteristic root matches a sign-scan") {
  for (double v : {0.8, 1.3, 1.9, 2.3}) {
    const auto m = solve_characteristic(v);
    auto f = [v](double u) {
      const double w = std::sqrt(v * v - u * u);
      return u * std::cyl_bessel_j(1.0, u) / std::cyl_bessel_j(0.0, u) -
             w * std::cyl_bessel_k(1.0, w) / std::cyl_bessel_k(0.0, w);
    };
    const int steps = 200000;
    double prev = f(1e-9), root = -1.0;
    for (int i = 1; i < steps; ++i) {
      const double u = v * i / steps;
      const double cur = f(u);
      if (prev < 0.0 && cur >= 0.0) {
        root = u;
        break;
      }
      prev = cur;
    }
    CHECK(std::abs(m.u - root) < 1e-4 * v);
  }
}

TEST_CASE("mode field is continuous at the core boundary") {
  const auto fiber = fiber_with_v(2.0);
  const auto mode = solve_mode(fiber, 1550.0);
  const double a = fiber.core_radius_um;
  CHECK(mode_field(a * (1 - 1e-12), fiber, mode) == doctest::Approx(mode_field(a * (1 + 1e-12), fiber, mode)));
  CHECK(mode_field(0.0, fiber, mode) == 1.0);
  CHECK(mode.beta_per_um > fiber.n2 * 2 * std::numbers::pi / 1.55);
  CHECK(mode.beta_per_um < fiber.n1 * 2 * std::numbers::pi / 1.55);
}

TEST_CASE("waist optimum agrees with a dense grid scan") {
  // Grid optima from an independent quadrature: (V, w/a, eta).
  const std::array<std::array<double, 3>, 2> grid = {{{2.405, 1.09048, 0.9966703672594432},
                                                      {2.0, 1.2588, 0.9916008056341161}}};
  for (const auto& row : grid) {
    const auto fiber = fiber_with_v(row[0]);
    const auto mode = solve_mode(fiber, 1550.0);
    const auto best = optimize_waist(fiber, mode, 1550.0);
    CHECK(std::abs(best.eta - row[2]) < 1e-4);
    CHECK(std::abs(best.waist_um / fiber.core_radius_um - row[1]) < 2e-3);
  }
}

TEST_CASE("overlap efficiency is bounded and peaks at the optimum") {
  const auto fiber = fiber_with_v(2.405);
  const auto mode = solve_mode(fiber, 1550.0);
  const auto best = optimize_waist(fiber, mode, 1550.0);
  for (double scale : {0.5, 0.8, 1.2, 2.0}) {
    const double e = overlap_eta({best.waist_um * scale, 1550.0}, fiber, mode);
    CHECK(e < best.eta);
    CHECK(e > 0.0);
  }
}

TEST_CASE("tilt reduces coupling monotonically and matches a 2-D overlap") {
  const auto fiber = StepIndexFiber::near_cutoff(1550.0);
  const auto mode = solve_mode(fiber, 1550.0);
  const auto best = optimize_waist(fiber, mode, 1550.0);
  double prev = best.eta + 1e-12;
  for (double th : {0.0, 0.01, 0.02, 0.025, 0.04}) {
    const double e = tilted_eta({best.waist_um, 1550.0}, fiber, mode, th);
    CHECK(e < prev);
    prev = e;
  }
  // Cartesian 2-D quadrature of the tilted overlap.
  CHECK(std::abs(tilted_eta({best.waist_um, 1550.0}, fiber, mode, 0.025) - 0.9234929269019462) < 1e-6);
  CHECK_THROWS_AS(tilted_eta({best.waist_um, 1550.0}, fiber, mode, 0.6), DomainError);
}

TEST_CASE("Fresnel facet loss") {
  CHECK(fresnel_transmission(1.0, 1.45) == doctest::Approx(1.0 - std::pow(0.45 / 2.45, 2)).epsilon(1e-15));
  CHECK(fresnel_transmission(1.0, 1.0) == 1.0);
  auto bare = StepIndexFiber::smf28_like(false);
  CHECK(facet_transmission(bare) < 1.0);
  CHECK(facet_transmission(StepIndexFiber::smf28_like(true)) == 1.0);
}

TEST_CASE("hollow-core coupling table") {
  CHECK(*effective_coupling(channel::MediumKind::HCF, 0.0) == doctest::Approx(0.98));
  CHECK(*effective_coupling(channel::MediumKind::HCF, kAngleTolerance) == doctest::Approx(0.79));
  CHECK(*effective_coupling(channel::MediumKind::HCF, 0.0125) == doctest::Approx(0.885));
  CHECK_FALSE(effective_coupling(channel::MediumKind::HCF, 0.03).has_value());
  CHECK(effective_coupling(channel::MediumKind::SMF, 0.0).has_value());
}

TEST_CASE("fiber validation") {
  CHECK_THROWS_AS((StepIndexFiber{5.0, 1.44, 1.45, true}.validate()), DomainError);
  CHECK_THROWS_AS((StepIndexFiber{0.0, 1.45, 1.44, true}.validate()), DomainError);
  CHECK(is_multimode(2.5));
  CHECK_FALSE(is_multimode(2.4));
}
