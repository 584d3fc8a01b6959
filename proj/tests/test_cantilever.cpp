#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fmscant/cantilever.hpp"
#include "fmscant/presets.hpp"
#include "support.hpp"

using namespace fmscant;
using Catch::Approx;
using testsupport::rel_diff;

namespace {
constexpr double kB = 1.381e-23;
constexpr double c_light = 2.998e8;

BudgetOptions only(bool thermal, bool shot, bool rin) {
  BudgetOptions o;
  o.terms = {thermal, shot, rin};
  return o;
}

// Independent evaluation of the closed-form SNR, written from the formula.
double snr_oracle(const Scenario& s) {
  const auto& c = s.cantilever;
  const double P0 = s.laser.power_W;
  const double g = 1.0 + c.reflectivity;
  const double enh = c.force_enhancement;
  const double aL = s.absorber.alpha_L_peak;
  const double hw = 2.0 * std::numbers::pi * 1.055e-34 * c_light / s.laser.wavelength_m;
  const double lor = s.laser.rin.xi_peak_rtHz *
                     std::sqrt(1.0 / (1.0 + std::pow((s.laser.rin.omega_L - c.omega_0) / s.laser.rin.gamma, 2)));
  const double xi2 = s.laser.broadband_rin_rtHz * s.laser.broadband_rin_rtHz + lor * lor;
  const double PN2 = P0 * P0 * xi2;
  const double num = std::pow(c.quality * g * enh * aL * P0, 2);
  const double den = 4.0 * kB * c.temperature_K * c.spring_N_per_m * c_light * c_light +
                     c.quality * g * g * enh * enh * c.omega_0 * (P0 * hw + PN2);
  return num / den;
}
}  // namespace

TEST_CASE("radiation force") {
  CHECK(radiation_force(1e-4, 0.5, 1.0) == Approx(1.5e-4 / c_light).epsilon(1e-15));
  CHECK(radiation_force(1e-4, 0.5, 1.0) == Approx(5.0e-13).epsilon(1e-3));
  CHECK(radiation_force(1e-4, 0.0, 1.0) == Approx(1e-4 / c_light).epsilon(1e-15));
  CHECK(radiation_force(1e-4, 0.5, 1e6) == Approx(1e6 * radiation_force(1e-4, 0.5, 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(radiation_force(-1.0, 0.5, 1.0), domain_error);
}

TEST_CASE("mechanical gain") {
  const Cantilever c = find_preset("paper-main")->cantilever;
  const double w0 = to_angular(c.omega_0);
  CHECK(mechanical_gain(c, w0) == Approx(2e5 / 0.3).epsilon(1e-12));
  CHECK(mechanical_gain(c, w0) == Approx(6.67e5).epsilon(1e-3));
  CHECK(mechanical_gain(c, 0.0) == Approx(1.0 / 0.3).epsilon(1e-15));
  for (double Q : {1e3, 1e4, 1e5, 1e6}) {
    Cantilever d = c;
    d.quality = Q;
    const double g = mechanical_gain(d, w0 * (1.0 + 1.0 / (2.0 * Q)));
    CHECK(rel_diff(g, (Q / d.spring_N_per_m) / std::sqrt(2.0)) < 1e-3);
  }
  CHECK_THROWS_AS(mechanical_gain(c, -1.0), domain_error);
}

TEST_CASE("noise budget of the worked example") {
  const Scenario s = *find_preset("paper-main");
  const auto b = noise_budget(s);
  CHECK(b.x_T_m == Approx(std::sqrt(4.0 * kB * 4.0 / 0.3)).epsilon(1e-14));
  CHECK(b.x_T_m == Approx(2.71e-11).epsilon(2e-3));
  CHECK(b.x_N_m == Approx(std::sqrt(2e5 * 2.25 * 2e7) * 1.8e-5 * 1e-4 / (0.3 * c_light)).epsilon(1e-14));
  CHECK(b.x_N_m == Approx(6.0e-11).epsilon(2e-3));
  CHECK(b.x_SN_m == Approx(1.8e-13).epsilon(3e-3));
  // Signal equals the RIN amplitude exactly at alpha_L = xi sqrt(w0/Q).
  CHECK(b.x_sig_m == Approx(b.x_N_m).epsilon(1e-12));
}

TEST_CASE("worked-example SNR") {
  const Scenario s = *find_preset("paper-main");
  CHECK(snr_cantilever(s, only(false, false, true)) == Approx(1.0).epsilon(1e-12));
  // With every term active: 1 / (1 + x_T^2/x_N^2 + x_SN^2/x_N^2).
  const auto b = noise_budget(s);
  const double expected = 1.0 / (1.0 + std::pow(b.x_T_m / b.x_N_m, 2) + std::pow(b.x_SN_m / b.x_N_m, 2));
  CHECK(snr_cantilever(s) == Approx(expected).epsilon(1e-12));
  CHECK(snr_cantilever(s) == Approx(0.830).margin(0.01));
  Scenario z = s;
  z.absorber.alpha_L_peak = 0.0;
  CHECK(snr_cantilever(z) == 0.0);
}

TEST_CASE("budget composition equals the direct SNR for random scenarios") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = testsupport::random_scenario(rng);
    const double direct = snr_cantilever(s);
    CHECK(rel_diff(noise_budget(s).snr(), direct) < 1e-12);
    CHECK(rel_diff(snr_oracle(s), direct) < 1e-12);
  }
}

TEST_CASE("minimum absorbance of the worked example") {
  const Scenario s = *find_preset("paper-main");
  CHECK(min_alpha_cantilever(s, AlphaMode::rin_only) == Approx(1.8e-4).epsilon(1e-12));
  CHECK(min_alpha_cantilever(s, AlphaMode::full) == Approx(1.97e-4).epsilon(5e-3));
  const auto b = noise_budget(s);
  CHECK(min_alpha_cantilever(s, AlphaMode::full) ==
        Approx(1.8e-4 * std::sqrt(1.0 + std::pow(b.x_T_m / b.x_N_m, 2) + std::pow(b.x_SN_m / b.x_N_m, 2)))
            .epsilon(1e-12));
  Scenario t = s;
  t.laser.broadband_rin_rtHz *= 2.0;
  CHECK(min_alpha_cantilever(t, AlphaMode::rin_only) == 2.0 * min_alpha_cantilever(s, AlphaMode::rin_only));
  Scenario at = s;
  at.absorber.alpha_L_peak = min_alpha_cantilever(s, AlphaMode::full);
  CHECK(snr_cantilever(at) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("minimum absorbance preconditions") {
  Scenario s = *find_preset("paper-main");
  s.cantilever.quality = 0.0;
  CHECK_THROWS_AS(min_alpha_cantilever(s, AlphaMode::rin_only), domain_error);
  s = *find_preset("paper-main");
  s.laser.power_W = 0.0;
  CHECK_THROWS_AS(min_alpha_cantilever(s, AlphaMode::full), domain_error);
}

TEST_CASE("full mode never beats rin_only") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const Scenario s = testsupport::random_scenario(rng);
    // Same noise terms except thermal and shot.
    CHECK(min_alpha_cantilever(s, AlphaMode::full) >= min_alpha_cantilever(s, AlphaMode::rin_only) * (1.0 - 1e-14));
  }
  const Scenario s = *find_preset("paper-main");
  const auto eq = only(false, false, true);
  CHECK(rel_diff(min_alpha_cantilever(s, AlphaMode::full, eq), min_alpha_cantilever(s, AlphaMode::rin_only)) < 1e-14);
}

TEST_CASE("scaling laws of the SNR") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Scenario s = testsupport::random_scenario(rng);
    const double f = testsupport::log_uniform(rng, 0.01, 100.0);
    Scenario p = s;
    p.laser.power_W *= f;
    CHECK(rel_diff(snr_cantilever(p, only(false, false, true)), snr_cantilever(s, only(false, false, true))) < 1e-12);
    CHECK(rel_diff(snr_cantilever(p, only(false, true, false)), f * snr_cantilever(s, only(false, true, false))) <
          1e-12);
    Scenario q = s;
    q.cantilever.quality *= f;
    CHECK(rel_diff(snr_cantilever(q, only(true, false, false)), f * f * snr_cantilever(s, only(true, false, false))) <
          1e-12);
  }
}

TEST_CASE("Lorentzian RIN density") {
  const RinSpectrum r{2e-5, 3e5, 1e6};
  CHECK(rin_power_density(r, 1e-4, 3e5) == Approx(2e-9).epsilon(1e-15));
  CHECK(rin_power_density(r, 1e-4, 3e5 + 1e6) == Approx(2e-9 / std::sqrt(2.0)).epsilon(1e-14));
  for (double mu : {0.5, 2.0, 5.0, 37.0}) {
    CHECK(rin_power_density(r, 1e-4, 3e5 + mu * 1e6) == Approx(2e-9 / std::sqrt(1.0 + mu * mu)).epsilon(1e-14));
  }
}

TEST_CASE("thermal-limit report") {
  const Scenario s = *find_preset("paper-eq4");
  const auto t = thermal_limit_margin(s);
  const double rhs = (c_light / (1.5 * 1e-4)) * std::sqrt(4.0 * std::numbers::pi * kB * 4.0 * 0.3 / (2e5 * 1e6));
  CHECK(t.rhs == Approx(rhs).epsilon(1e-13));
  CHECK(t.rhs == Approx(6.4e-5).epsilon(1e-2));
  CHECK(t.mu == Approx((2e7 - 3e5) / 1e6).epsilon(1e-15));
  CHECK(t.satisfied == (t.lhs < t.rhs));

  Scenario at5 = s;
  at5.cantilever.omega_0 = s.laser.rin.omega_L + 5.0 * s.laser.rin.gamma;
  const auto b = thermal_limit_margin(at5);
  CHECK(b.lhs == Approx(std::sqrt(5.0 / 26.0) * 1.46e-4).epsilon(1e-14));
  CHECK(rel_diff(b.lhs, b.rhs) < 0.02);

  Scenario far = s;
  far.cantilever.omega_0 = 1e15;
  const auto f = thermal_limit_margin(far);
  CHECK(rel_diff(f.lhs, 1.46e-4 / std::sqrt(f.mu)) < 1e-9);
  CHECK(f.lhs < 1e-3 * f.rhs);
  CHECK(f.satisfied);

  Scenario below = s;
  below.cantilever.omega_0 = s.laser.rin.omega_L;
  CHECK_THROWS_AS(thermal_limit_margin(below), domain_error);
}

TEST_CASE("thermal-limit lhs peaks at mu = 1") {
  double best_mu = 0.0;
  double best = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double mu = 1e-3 * i;
    const double v = detail::thermal_limit_lhs(mu, 1.0);
    if (v > best) {
      best = v;
      best_mu = mu;
    }
  }
  CHECK(best_mu == Approx(1.0).margin(1e-3));
  CHECK(best == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("minimum resonant frequency against the quadratic closed form") {
  // mu/(1+mu^2) = r^2  <=>  r^2 mu^2 - mu + r^2 = 0, larger root on mu > 1.
  const Scenario s = *find_preset("paper-eq4");
  const double r = detail::thermal_limit_rhs(s) / s.laser.rin.xi_peak_rtHz;
  const double a = r * r;
  const double mu_star = (1.0 + std::sqrt(1.0 - 4.0 * a * a)) / (2.0 * a);
  const auto b = min_resonant_frequency(s);
  REQUIRE(b.constrained);
  CHECK(rel_diff(b.mu, mu_star) < 2e-6);
  CHECK(b.mu == Approx(5.0).margin(0.1));
  CHECK(b.omega_0 == Approx(5.3e6).epsilon(0.02));
  CHECK(b.omega_0 == Approx(s.laser.rin.omega_L + b.mu * s.laser.rin.gamma).epsilon(1e-15));

  Scenario low = s;
  low.laser.rin.xi_peak_rtHz = 1e-5;
  CHECK_FALSE(min_resonant_frequency(low).constrained);
}

TEST_CASE("minimum resonant frequency is monotone") {
  const Scenario base = *find_preset("paper-eq4");
  double prev = 0.0;
  for (double xi = 1e-4; xi < 1e-2; xi *= 1.3) {
    Scenario s = base;
    s.laser.rin.xi_peak_rtHz = xi;
    const auto b = min_resonant_frequency(s);
    REQUIRE(b.constrained);
    CHECK(b.mu > prev);
    prev = b.mu;
  }
  prev = 0.0;
  for (double P = 1e-4; P < 1e-2; P *= 1.5) {
    Scenario s = base;
    s.laser.power_W = P;
    const double mu = min_resonant_frequency(s).mu;
    CHECK(mu > prev);
    prev = mu;
  }
  prev = 1e300;
  for (double T = 0.5; T < 9.0; T *= 1.3) {
    Scenario s = base;
    s.cantilever.temperature_K = T;
    const double mu = min_resonant_frequency(s).mu;
    CHECK(mu < prev);
    prev = mu;
  }
  prev = 0.0;
  for (double Q = 1.5e5; Q < 1e8; Q *= 2.0) {
    Scenario s = base;
    s.cantilever.quality = Q;
    const double mu = min_resonant_frequency(s).mu;
    CHECK(mu > prev);
    prev = mu;
  }
  Scenario twice = base;
  twice.laser.power_W *= 2.0;
  CHECK(detail::thermal_limit_rhs(twice) == Approx(detail::thermal_limit_rhs(base) / 2.0).epsilon(1e-15));
}

TEST_CASE("thermal force sensitivity") {
  const Scenario y = *find_preset("yang2002");
  CHECK(y.cantilever.spring_N_per_m == 4.4e-3);
  CHECK(y.cantilever.quality == 1e5);
  const double ft = thermal_force_sensitivity(y.cantilever);
  CHECK(ft == Approx(std::sqrt(4.0 * kB * 300.0 * 4.4e-3 / (1e5 * 2.0 * std::numbers::pi * 1e4))).epsilon(1e-14));
  CHECK(ft == Approx(1.1e-16).epsilon(0.05));
  Cantilever hot = y.cantilever;
  hot.temperature_K *= 4.0;
  CHECK(thermal_force_sensitivity(hot) == Approx(2.0 * ft).epsilon(1e-15));
  Cantilever q = y.cantilever;
  q.quality *= 4.0;
  CHECK(thermal_force_sensitivity(q) == Approx(ft / 2.0).epsilon(1e-15));
}

TEST_CASE("angular convention and equipartition options") {
  const Scenario s = *find_preset("paper-main");
  BudgetOptions o;
  o.convention = FrequencyConvention::angular;
  o.thermal_mode = ThermalMode::equipartition;
  const auto p = noise_budget(s);
  const auto a = noise_budget(s, o);
  CHECK(a.x_T_m == Approx(p.x_T_m / 2.0).epsilon(1e-14));
  CHECK(a.x_N_m == Approx(p.x_N_m * std::sqrt(2.0 * std::numbers::pi / 4.0)).epsilon(1e-14));
  CHECK(a.x_sig_m == p.x_sig_m);
  CHECK(cantilever_bandwidth(s.cantilever) == Approx(100.0).epsilon(1e-15));
}

TEST_CASE("chain-mode signal uses the beat amplitude") {
  Scenario s = *find_preset("paper-main");
  BudgetOptions o;
  o.signal = SignalSource::chain;
  const double aL = beat_signal(s).amplitude_W() / s.laser.power_W;
  CHECK(noise_budget(s, o).x_sig_m == Approx(noise_budget(s).x_sig_m * aL / s.absorber.alpha_L_peak).epsilon(1e-14));
  CHECK(rel_diff(noise_budget(s, o).snr(), snr_cantilever(s, o)) < 1e-12);
}
