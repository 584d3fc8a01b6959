#pragma once

// Helpers shared by the test binaries: random scenarios and small
// independent reference implementations used as oracles.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "fmscant/core.hpp"
#include "fmscant/presets.hpp"

namespace testsupport {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// A valid, resonantly driven scenario with every parameter randomised over a
// few decades around the worked example.
inline fmscant::Scenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  fmscant::Scenario s = *fmscant::find_preset("paper-main");
  s.laser.power_W = log_uniform(rng, 1e-6, 1e-2);
  s.laser.wavelength_m = log_uniform(rng, 300e-9, 3e-6);
  s.laser.broadband_rin_rtHz = log_uniform(rng, 1e-8, 1e-4);
  s.laser.rin = {log_uniform(rng, 1e-7, 1e-3), log_uniform(rng, 1e4, 1e7), log_uniform(rng, 1e4, 1e7)};
  s.cantilever.spring_N_per_m = log_uniform(rng, 1e-3, 10.0);
  s.cantilever.quality = log_uniform(rng, 10.0, 1e7);
  s.cantilever.omega_0 = log_uniform(rng, 1e3, 1e9);
  s.cantilever.reflectivity = unit(rng);
  s.cantilever.temperature_K = log_uniform(rng, 0.01, 400.0);
  s.cantilever.force_enhancement = log_uniform(rng, 1.0, 1e6);
  s.modulation.omega_mod = s.cantilever.omega_0;
  s.absorber.alpha_L_peak = log_uniform(rng, 1e-7, 1e-1);
  return s;
}

// J_n(x) from its power series, summed until terms stop contributing.
inline double bessel_j_series(int n, double x) {
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= (x / 2.0) / k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x * x / 4.0) / (static_cast<double>(k) * static_cast<double>(k + n));
    sum += term;
    if (std::abs(term) < 1e-300 || std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Beat components by brute force: sample |E(t)|^2 of the carrier plus first
// sidebands over one modulation period and project onto cos and sin.
struct NumericBeat {
  double dc = 0.0;
  double inphase = 0.0;
  double quadrature = 0.0;
};

inline NumericBeat numeric_beat(const fmscant::Scenario& s, int samples = 4096) {
  // Extended precision: the in-phase part is a small difference of order-one terms.
  using ld = long double;
  using cd = std::complex<ld>;
  const ld M = s.modulation.index;
  const ld W = s.modulation.omega_mod;
  const auto& a = s.absorber;
  auto transmission = [&](ld detuning) {
    const ld g = a.gamma_a;
    const ld den = g * g + detuning * detuning;
    const ld delta = 0.5L * a.alpha_L_peak * g * g / den;
    const ld phi = 0.5L * a.alpha_L_peak * g * detuning / den;
    return std::exp(cd(-delta, -phi));
  };
  const ld j0 = bessel_j_series(0, static_cast<double>(M));
  const ld j1 = bessel_j_series(1, static_cast<double>(M));
  const ld dc0 = a.carrier_detuning;
  const cd t0 = transmission(dc0);
  const cd tp = transmission(dc0 + W);
  const cd tm = transmission(dc0 - W);
  const ld pi = 3.141592653589793238462643383279502884L;
  ld dc = 0.0L;
  ld in = 0.0L;
  ld quad = 0.0L;
  for (int i = 0; i < samples; ++i) {
    const ld th = 2.0L * pi * i / samples;
    const cd e = j0 * t0 + j1 * tp * std::polar(1.0L, th) - j1 * tm * std::polar(1.0L, -th);
    const ld p = static_cast<ld>(s.laser.power_W) * std::norm(e);
    dc += p;
    in += 2.0L * p * std::cos(th);
    quad += 2.0L * p * std::sin(th);
  }
  NumericBeat r;
  r.dc = static_cast<double>(dc / samples);
  r.inphase = static_cast<double>(in / samples);
  r.quadrature = static_cast<double>(quad / samples);
  return r;
}

}  // namespace testsupport
