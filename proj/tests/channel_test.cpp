#include <doctest.h>

#include <cmath>

#include "repeaterscope/channel.hpp"
#include "repeaterscope/errors.hpp"

using namespace repeaterscope;
using namespace repeaterscope::channel;

TEST_CASE("built-in media") {
  const auto smf = MediumProfile::smf();
  const auto hcf = MediumProfile::hcf();
  CHECK(smf.allows(1550));
  CHECK_FALSE(smf.allows(780));
  CHECK(smf.attenuation_length(1550) == 28.95);
  CHECK(hcf.attenuation_length(780) == 24.127);
  CHECK(hcf.attenuation_length(1550) == 78.96);
  CHECK(smf.coupling_mem_fiber == 0.83);
  CHECK(hcf.coupling_mem_fiber == 0.79);
  CHECK_THROWS_AS(smf.attenuation_length(780), UnsupportedWavelength);
  CHECK(medium_from_string("hcf") == MediumKind::HCF);
  CHECK_THROWS_AS(medium_from_string("DNANF9"), ConfigError);
}

TEST_CASE("profile validation") {
  auto p = MediumProfile::hcf();
  p.allowed_wavelengths_nm.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = MediumProfile::hcf();
  p.att_length_km[780] = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("elementary success probability") {
  const auto hcf = MediumProfile::hcf();
  const LinkBudget budget{0.9, 0.5, 20.0};
  const double eta780 = 0.9 * 0.79;
  const double eta1550 = 0.9 * 0.79 * 0.5;
  CHECK(eta_c(hcf, budget, 780) == doctest::Approx(eta780).epsilon(1e-15));
  CHECK(eta_c(hcf, budget, 1550) == doctest::Approx(eta1550).epsilon(1e-15));
  CHECK(elementary_success(hcf, budget, 780) ==
        doctest::Approx(0.5 * eta780 * eta780 * std::exp(-20.0 / 24.127)).epsilon(1e-15));
  CHECK(elementary_success(hcf, budget, 1550) ==
        doctest::Approx(0.5 * eta1550 * eta1550 * std::exp(-20.0 / 78.96)).epsilon(1e-15));
  CHECK(elementary_success(hcf, {1.0, 1.0, 0.0}, 1550) == doctest::Approx(0.5 * 0.79 * 0.79));
}

TEST_CASE("wavelength selection") {
  const auto hcf = MediumProfile::hcf();
  CHECK(select_wavelength(hcf, {1.0, 0.5, 20.0}).wavelength_nm == 780);
  CHECK(select_wavelength(hcf, {1.0, 1.0, 20.0}).wavelength_nm == 1550);
  CHECK(select_wavelength(hcf, {1.0, 0.3, 150.0}).wavelength_nm == 1550);
  for (double conv : {0.05, 0.5, 1.0}) {
    for (double l0 : {1.0, 30.0, 100.0}) {
      CHECK(select_wavelength(MediumProfile::smf(), {1.0, conv, l0}).wavelength_nm == 1550);
    }
  }
}

TEST_CASE("conversion threshold") {
  const auto hcf = MediumProfile::hcf();
  CHECK(conversion_threshold(hcf, 20.0) == doctest::Approx(0.7499).epsilon(2e-4));
  CHECK(conversion_threshold(hcf, 50.0) == doctest::Approx(0.4870).epsilon(2e-4));
  CHECK_THROWS_AS(conversion_threshold(MediumProfile::smf(), 20.0), UnsupportedWavelength);
  // Just above the threshold telecom wins, just below memory-native wins.
  const double thr = conversion_threshold(hcf, 35.0);
  CHECK(select_wavelength(hcf, {1.0, thr * (1 + 1e-9), 35.0}).wavelength_nm == 1550);
  CHECK(select_wavelength(hcf, {1.0, thr * (1 - 1e-9), 35.0}).wavelength_nm == 780);
}

TEST_CASE("budget validation") {
  CHECK_THROWS_AS((LinkBudget{1.2, 1.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((LinkBudget{1.0, -0.1, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((LinkBudget{1.0, 1.0, -1.0}.validate()), ConfigError);
}
