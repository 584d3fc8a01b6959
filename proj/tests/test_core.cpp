#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "fmscant/core.hpp"
#include "fmscant/parameters.hpp"
#include "fmscant/presets.hpp"
#include "support.hpp"

using namespace fmscant;
using Catch::Approx;

namespace {
std::vector<Violation> violations(const Scenario& s, Scheme scheme = Scheme::any) {
  auto v = validate_scenario(s, scheme);
  if (auto* bad = std::get_if<std::vector<Violation>>(&v)) return *bad;
  return {};
}
bool has_message(const std::vector<Violation>& v, std::string_view msg) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.message == msg; });
}
}  // namespace

TEST_CASE("worked parameter set validates, also as a resonant cantilever scenario") {
  const Scenario s = *find_preset("paper-main");
  CHECK(s.cantilever.temperature_K == 4.0);
  CHECK(s.cantilever.spring_N_per_m == 0.3);
  CHECK(s.cantilever.quality == 2e5);
  CHECK(s.cantilever.reflectivity == 0.5);
  CHECK(s.laser.power_W == 1e-4);
  CHECK(s.cantilever.omega_0 == 2e7);
  CHECK(violations(s).empty());
  CHECK(violations(s, Scheme::cantilever).empty());
}

TEST_CASE("every built-in preset is valid") {
  for (const auto& p : presets()) {
    INFO(p.name);
    CHECK(violations(p.scenario).empty());
  }
}

TEST_CASE("zero power is reported by name") {
  Scenario s = *find_preset("paper-main");
  s.laser.power_W = 0.0;
  const auto v = violations(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "laser.power_W");
  CHECK(v[0].message == "laser.power_W must be > 0");
}

TEST_CASE("reflectivity above one is reported") {
  Scenario s = *find_preset("paper-main");
  s.cantilever.reflectivity = 1.5;
  CHECK(has_message(violations(s), "cantilever.reflectivity ∈ [0,1]"));
}

TEST_CASE("all violations are collected, not just the first") {
  Scenario s = *find_preset("paper-main");
  s.laser.power_W = 0.0;
  s.laser.wavelength_m = -1.0;
  s.cantilever.reflectivity = 1.5;
  s.cantilever.quality = 0.0;
  s.detector.quantum_efficiency = 1.2;
  s.detector.stage_noise_figures_dB = {2.0, -1.0};
  s.absorber.gamma_a = 0.0;
  s.laser.rin.gamma = -1.0;
  const auto v = violations(s);
  CHECK(v.size() == 8);
  std::vector<std::string> fields;
  for (const auto& x : v) fields.push_back(x.field);
  std::sort(fields.begin(), fields.end());
  CHECK(std::adjacent_find(fields.begin(), fields.end()) == fields.end());
  CHECK(has_message(v, "detector.nf2_dB must be >= 0"));
}

TEST_CASE("NaN fields are rejected") {
  Scenario s = *find_preset("paper-main");
  s.cantilever.spring_N_per_m = std::nan("");
  s.absorber.carrier_detuning = std::nan("");
  CHECK(violations(s).size() == 2);
}

TEST_CASE("boundary values of the invariants") {
  Scenario s = *find_preset("paper-main");
  s.cantilever.reflectivity = 0.0;
  CHECK(violations(s).empty());
  s.cantilever.reflectivity = 1.0;
  CHECK(violations(s).empty());
  s.cantilever.force_enhancement = 0.999;
  CHECK(has_message(violations(s), "cantilever.force_enhancement must be >= 1"));
  s = *find_preset("paper-main");
  s.detector.quantum_efficiency = 1.0;
  CHECK(violations(s).empty());
  s.detector.quantum_efficiency = 0.0;
  CHECK(violations(s).size() == 1);
}

TEST_CASE("cantilever scheme requires resonant drive") {
  const Scenario e = *find_preset("paper-electronic");
  CHECK(violations(e).empty());
  const auto v = violations(e, Scheme::cantilever);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "modulation.omega_mod_paperHz");
  CHECK_THROWS_AS(require_valid(e, Scheme::cantilever), domain_error);
}

TEST_CASE("validation is idempotent") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Scenario s = testsupport::random_scenario(rng);
    const ValidatedScenario once = require_valid(s, Scheme::cantilever);
    const ValidatedScenario twice = require_valid(once.scenario(), Scheme::cantilever);
    CHECK(scenario_fingerprint(once.scenario()) == scenario_fingerprint(s));
    CHECK(scenario_fingerprint(twice.scenario()) == scenario_fingerprint(s));
  }
}

TEST_CASE("photon energy") {
  // 2*pi*hbar*c / lambda with the frozen constants
  const double hc = 2.0 * std::numbers::pi * 1.055e-34 * 2.998e8;
  CHECK(photon_energy(680e-9) == Approx(hc / 680e-9).epsilon(1e-15));
  CHECK(photon_energy(680e-9) == Approx(2.92e-19).epsilon(2e-3));
  CHECK(photon_energy(1360e-9) == Approx(photon_energy(680e-9) / 2.0).epsilon(1e-15));
  CHECK(photon_energy(1.24e-6) == Approx(1.60e-19).epsilon(2e-3));
  CHECK_THROWS_AS(photon_energy(0.0), domain_error);
  CHECK_THROWS_AS(photon_energy(-1e-6), domain_error);
}

TEST_CASE("photon energy times wavelength is constant") {
  std::mt19937_64 rng(5);
  const double ref = photon_energy(1e-6) * 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double lam = testsupport::log_uniform(rng, 1e-9, 1e-2);
    CHECK(testsupport::rel_diff(photon_energy(lam) * lam, ref) < 1e-12);
  }
}

TEST_CASE("constants are the frozen values") {
  STATIC_REQUIRE(constants::c == 2.998e8);
  STATIC_REQUIRE(constants::k_B == 1.381e-23);
  STATIC_REQUIRE(constants::e == 1.602e-19);
  STATIC_REQUIRE(constants::hbar == 1.055e-34);
}

TEST_CASE("angular conversion round-trips") {
  CHECK(to_angular(1.0) == Approx(2.0 * std::numbers::pi));
  CHECK(from_angular(to_angular(12345.678)) == Approx(12345.678).epsilon(1e-15));
}

TEST_CASE("parameter registry reads and writes every canonical key") {
  Scenario s = *find_preset("paper-main");
  for (const auto& key : canonical_keys(s)) {
    INFO(key);
    const auto v = get_parameter(s, key);
    REQUIRE(v.has_value());
    Scenario t = s;
    set_parameter(t, key, *v);
    CHECK(scenario_fingerprint(t) == scenario_fingerprint(s));
  }
}

TEST_CASE("angular aliases convert") {
  Scenario s = *find_preset("paper-main");
  set_parameter(s, "cantilever.omega_0_rad_per_s", 1e5);
  CHECK(s.cantilever.omega_0 == Approx(1e5 / (2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(*get_parameter(s, "cantilever.omega_0_rad_per_s") == Approx(1e5).epsilon(1e-15));
}

TEST_CASE("noise-figure stages are addressable and extendable") {
  Scenario s = *find_preset("paper-main");
  CHECK(*get_parameter(s, "detector.nf_stage_count") == 3.0);
  set_parameter(s, "detector.nf4_dB", 1.0);
  CHECK(s.detector.stage_noise_figures_dB.size() == 4);
  CHECK_THROWS_AS(set_parameter(s, "detector.nf9_dB", 1.0), config_error);
  set_parameter(s, "detector.nf_stage_count", 1.0);
  CHECK(s.detector.stage_noise_figures_dB == std::vector<double>{2.0});
  CHECK_THROWS_AS(set_parameter(s, "laser.colour", 1.0), config_error);
  CHECK_FALSE(get_parameter(s, "laser.colour").has_value());
}

TEST_CASE("fingerprint separates scenarios and is stable") {
  const Scenario a = *find_preset("paper-main");
  Scenario b = a;
  b.cantilever.quality = std::nextafter(b.cantilever.quality, 1e9);
  CHECK(scenario_fingerprint(a) != scenario_fingerprint(b));
  CHECK(scenario_fingerprint(a) == scenario_fingerprint(*find_preset("paper-main")));
}
