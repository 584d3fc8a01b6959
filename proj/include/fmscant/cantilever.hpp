#pragma once

// Cantilever detection: radiation-pressure drive, mechanical response, the
// four vibrational amplitudes (signal, thermal, shot, intensity noise), the
// resulting SNR and the thermal-noise-limit condition for a Lorentzian RIN
// peak.

#include <cmath>
#include <string>

#include "fmscant/core.hpp"
#include "fmscant/optics.hpp"

namespace fmscant {

enum class FrequencyConvention {
  paper,    // omega values used verbatim, detection bandwidth omega_0/Q
  angular,  // omega_0 -> 2*pi*omega_0, bandwidth = mechanical ENBW 2*pi*omega_0/(4Q)
};

enum class ThermalMode {
  paper,          // x_T^2 = 4 k_B T / k
  equipartition,  // x_T^2 = k_B T / k
};

enum class SignalSource {
  paper,  // absorber.alpha_L_peak is the drive absorbance
  chain,  // absorbance equivalent of the fms-optics beat amplitude
};

struct NoiseTerms {
  bool thermal = true;
  bool shot = true;
  bool rin = true;
};

struct BudgetOptions {
  FrequencyConvention convention = FrequencyConvention::paper;
  ThermalMode thermal_mode = ThermalMode::paper;
  SignalSource signal = SignalSource::paper;
  NoiseTerms terms;
};

enum class AlphaMode { rin_only, full };

struct NoiseBudget {
  double x_sig_m = 0.0;
  double x_T_m = 0.0;
  double x_SN_m = 0.0;
  double x_N_m = 0.0;

  double noise_ms() const { return x_T_m * x_T_m + x_SN_m * x_SN_m + x_N_m * x_N_m; }
  double snr() const { return x_sig_m * x_sig_m / noise_ms(); }
};

struct ThermalLimitReport {
  double mu = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

struct ResonanceBound {
  bool constrained = false;  // false: the condition holds at every omega_0
  double mu = 0.0;
  double omega_0 = 0.0;
};

// F = enhancement * (1+R) * P / c
inline double radiation_force(double power_W, double reflectivity, double enhancement = 1.0) {
  if (!(power_W >= 0.0)) throw domain_error("radiation_force: power must be >= 0");
  return enhancement * (1.0 + reflectivity) * power_W / constants::c;
}

// |chi(w)| in m/N for an angular drive frequency; the resonance sits at
// 2*pi*omega_0.
inline double mechanical_gain(const Cantilever& c, double drive_frequency) {
  if (!(drive_frequency >= 0.0)) throw domain_error("mechanical_gain: drive frequency must be >= 0");
  const double w0 = to_angular(c.omega_0);
  const double w = drive_frequency;
  const double a = w0 * w0 - w * w;
  const double b = w0 * w / c.quality;
  return (w0 * w0 / std::sqrt(a * a + b * b)) / c.spring_N_per_m;
}

// Lorentzian RIN power density P_N(w) = P0 xi sqrt(G^2 / (G^2 + (wL - w)^2)).
inline double rin_power_density(const RinSpectrum& r, double P0, double omega) {
  const double g2 = r.gamma * r.gamma;
  const double d = r.omega_L - omega;
  return P0 * r.xi_peak_rtHz * std::sqrt(g2 / (g2 + d * d));
}

// Total RIN at `omega`: flat floor and Lorentzian peak added in power.
inline double relative_intensity_noise(const LaserSource& laser, double omega) {
  const double peak = rin_power_density(laser.rin, 1.0, omega);
  return std::sqrt(laser.broadband_rin_rtHz * laser.broadband_rin_rtHz + peak * peak);
}

// The omega_0 factor multiplying the optical noise densities.
inline double noise_bandwidth_omega(const Cantilever& c, FrequencyConvention conv) {
  return conv == FrequencyConvention::paper ? c.omega_0 : to_angular(c.omega_0) / 4.0;
}

// Detection bandwidth implied by the cantilever itself: omega_0/Q in paper
// units, or the equivalent noise bandwidth in Hz under the angular convention.
inline double cantilever_bandwidth(const Cantilever& c, FrequencyConvention conv = FrequencyConvention::paper) {
  return noise_bandwidth_omega(c, conv) / c.quality;
}

inline double thermal_prefactor(ThermalMode mode) { return mode == ThermalMode::paper ? 4.0 : 1.0; }

// Drive absorbance used for the signal amplitude.
inline double effective_absorbance(const Scenario& s, SignalSource src) {
  if (src == SignalSource::paper) return s.absorber.alpha_L_peak;
  return beat_signal(s).amplitude_W() / s.laser.power_W;
}

inline NoiseBudget noise_budget(const Scenario& s, const BudgetOptions& opt = {}) {
  const auto& c = s.cantilever;
  const double P0 = s.laser.power_W;
  const double kc = c.spring_N_per_m * constants::c;
  const double coupling = (1.0 + c.reflectivity) * c.force_enhancement;
  const double w = noise_bandwidth_omega(c, opt.convention);
  const double resp = std::sqrt(c.quality * coupling * coupling * w);

  NoiseBudget b;
  b.x_sig_m = c.quality * coupling * effective_absorbance(s, opt.signal) * P0 / kc;
  if (opt.terms.thermal) {
    b.x_T_m = std::sqrt(thermal_prefactor(opt.thermal_mode) * constants::k_B * c.temperature_K / c.spring_N_per_m);
  }
  if (opt.terms.shot) {
    b.x_SN_m = resp * std::sqrt(P0 * photon_energy(s.laser.wavelength_m)) / kc;
  }
  if (opt.terms.rin) {
    b.x_N_m = resp * P0 * relative_intensity_noise(s.laser, c.omega_0) / kc;
  }
  return b;
}

// Denominator of snr_cantilever().
inline double snr_cantilever_denominator(const Scenario& s, const BudgetOptions& opt = {}) {
  const auto& c = s.cantilever;
  const double P0 = s.laser.power_W;
  const double coupling = (1.0 + c.reflectivity) * c.force_enhancement;
  const double PN = P0 * relative_intensity_noise(s.laser, c.omega_0);
  double optical = 0.0;
  if (opt.terms.shot) optical += P0 * photon_energy(s.laser.wavelength_m);
  if (opt.terms.rin) optical += PN * PN;
  double thermal = 0.0;
  if (opt.terms.thermal) {
    thermal = thermal_prefactor(opt.thermal_mode) * constants::k_B * c.temperature_K * c.spring_N_per_m *
              constants::c * constants::c;
  }
  return thermal + c.quality * coupling * coupling * noise_bandwidth_omega(c, opt.convention) * optical;
}

// Q^2 (1+R)^2 (aL)^2 P0^2 / (4 k_B T k c^2 + Q (1+R)^2 w0 [P0 hbar w + P_N(w0)^2])
inline double snr_cantilever(const Scenario& s, const BudgetOptions& opt = {}) {
  const auto& c = s.cantilever;
  const double P0 = s.laser.power_W;
  const double coupling = (1.0 + c.reflectivity) * c.force_enhancement;
  const double aL = effective_absorbance(s, opt.signal);
  const double num = c.quality * c.quality * coupling * coupling * aL * aL * P0 * P0;
  return num / snr_cantilever_denominator(s, opt);
}

// Absorbance at which the SNR equals one.
inline double min_alpha_cantilever(const Scenario& s, AlphaMode mode, const BudgetOptions& opt = {}) {
  const auto& c = s.cantilever;
  const double P0 = s.laser.power_W;
  if (!(c.quality > 0.0)) throw domain_error("min_alpha_cantilever: Q must be > 0");
  if (!(P0 > 0.0)) throw domain_error("min_alpha_cantilever: P0 must be > 0");
  if (mode == AlphaMode::rin_only) {
    return relative_intensity_noise(s.laser, c.omega_0) * std::sqrt(noise_bandwidth_omega(c, opt.convention) / c.quality);
  }
  const double coupling = (1.0 + c.reflectivity) * c.force_enhancement;
  return std::sqrt(snr_cantilever_denominator(s, opt)) / (c.quality * coupling * P0);
}

namespace detail {
inline double thermal_limit_rhs(const Scenario& s) {
  const auto& c = s.cantilever;
  const double coupling = (1.0 + c.reflectivity) * c.force_enhancement;
  return constants::c / (coupling * s.laser.power_W) *
         std::sqrt(4.0 * std::numbers::pi * constants::k_B * c.temperature_K * c.spring_N_per_m /
                   (c.quality * s.laser.rin.gamma));
}
inline double thermal_limit_lhs(double mu, double xi_peak) { return std::sqrt(mu / (1.0 + mu * mu)) * xi_peak; }
}  // namespace detail

// [mu/(1+mu^2)]^{1/2} xi < c/((1+R)P0) sqrt(4 pi k_B T k/(Q G)),  mu = (w0 - wL)/G.
// Only the Lorentzian peak enters; the flat floor is not part of this test.
inline ThermalLimitReport thermal_limit_margin(const Scenario& s) {
  const auto& r = s.laser.rin;
  const double mu = (s.cantilever.omega_0 - r.omega_L) / r.gamma;
  if (!(mu > 0.0)) {
    throw domain_error("thermal_limit_margin: requires omega_0 > omega_L (mu > 0), got mu = " + std::to_string(mu));
  }
  ThermalLimitReport rep;
  rep.mu = mu;
  rep.lhs = detail::thermal_limit_lhs(mu, r.xi_peak_rtHz);
  rep.rhs = detail::thermal_limit_rhs(s);
  rep.satisfied = rep.lhs < rep.rhs;
  return rep;
}

// Smallest omega_0 above the noise peak for which the thermal-limit
// condition holds. The lhs peaks at mu = 1 and decreases beyond it, so the
// boundary is bracketed on (1, mu_hi] and found by bisection.
inline ResonanceBound min_resonant_frequency(const Scenario& s, double rel_tol = 1e-6) {
  const auto& r = s.laser.rin;
  const double rhs = detail::thermal_limit_rhs(s);
  const double xi = r.xi_peak_rtHz;
  if (xi / std::sqrt(2.0) < rhs) return {false, 0.0, 0.0};

  auto f = [&](double mu) { return detail::thermal_limit_lhs(mu, xi) - rhs; };
  double lo = 1.0;
  // lhs < xi/sqrt(mu), so f < 0 once mu > (xi/rhs)^2.
  double hi = 2.0 * (xi / rhs) * (xi / rhs) + 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * hi) {
      const double mu = 0.5 * (lo + hi);
      return {true, mu, r.omega_L + mu * r.gamma};
    }
  }
  throw numeric_error("min_resonant_frequency: bisection did not converge in 200 steps");
}

// Thermal force noise density sqrt(4 k_B T k / (Q omega_0)), paper units.
inline double thermal_force_sensitivity(const Cantilever& c) {
  return std::sqrt(4.0 * constants::k_B * c.temperature_K * c.spring_N_per_m / (c.quality * c.omega_0));
}

}  // namespace fmscant
