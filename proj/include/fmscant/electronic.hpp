#pragma once

// Conventional photodetector + amplifier chain used as the benchmark for the
// cantilever scheme.

#include <cmath>
#include <span>

#include "fmscant/cantilever.hpp"
#include "fmscant/core.hpp"

namespace fmscant {

// g = e * eta / (hbar * omega), A/W
inline double responsivity(double wavelength_m, double quantum_efficiency) {
  if (!(quantum_efficiency >= 0.0 && quantum_efficiency <= 1.0)) {
    throw domain_error("responsivity: quantum efficiency must lie in [0,1]");
  }
  return constants::e * quantum_efficiency / photon_energy(wavelength_m);
}

struct NoiseFigure {
  double nf_dB = 0.0;
  double nf_linear = 1.0;
};

// Cascaded stages: dB values add, linear factor is 10^(dB/10).
inline NoiseFigure total_noise_figure(std::span<const double> stages_dB) {
  NoiseFigure nf;
  for (double s : stages_dB) {
    if (!(s >= 0.0)) throw domain_error("total_noise_figure: stage noise figures must be >= 0 dB");
    nf.nf_dB += s;
  }
  nf.nf_linear = std::pow(10.0, nf.nf_dB / 10.0);
  return nf;
}

// Delta f = f_mod / Q_m with the modulation frequency in Hz-like paper units.
inline double detection_bandwidth(double omega_mod, double source_quality) {
  if (!(omega_mod > 0.0) || !(source_quality > 0.0)) {
    throw domain_error("detection_bandwidth: modulation frequency and source quality must be > 0");
  }
  return omega_mod / source_quality;
}

enum class JohnsonModel {
  as_printed,    // Delta f * e * 2 k_B T / R_load
  conventional,  // 4 k_B T Delta f / R_load
};

struct ElectronicOptions {
  JohnsonModel johnson = JohnsonModel::as_printed;
};

struct ElectronicBudget {
  double responsivity_A_per_W = 0.0;
  double xi_eff_rtHz = 0.0;
  double shot_term = 0.0;
  double johnson_term = 0.0;
  double rin_term = 0.0;
  double signal_term = 0.0;

  double noise() const { return shot_term + johnson_term + rin_term; }
  double snr() const { return signal_term / noise(); }
};

inline ElectronicBudget electronic_budget(const Scenario& s, double alpha_L, const ElectronicOptions& opt = {}) {
  const auto& d = s.detector;
  const double P0 = s.laser.power_W;
  const double g = responsivity(s.laser.wavelength_m, d.quantum_efficiency);
  const double nf = total_noise_figure(d.stage_noise_figures_dB).nf_linear;
  const double df = d.bandwidth_Hz;

  ElectronicBudget b;
  b.responsivity_A_per_W = g;
  b.xi_eff_rtHz = relative_intensity_noise(s.laser, s.modulation.omega_mod) * nf;
  b.shot_term = df * constants::e * g * P0;
  b.johnson_term = opt.johnson == JohnsonModel::as_printed
                       ? df * constants::e * 2.0 * constants::k_B * d.temperature_K / d.load_resistance_ohm
                       : 4.0 * constants::k_B * d.temperature_K * df / d.load_resistance_ohm;
  b.rin_term = df * g * g * b.xi_eff_rtHz * b.xi_eff_rtHz * P0 * P0;
  b.signal_term = g * g * P0 * P0 * alpha_L * alpha_L;
  return b;
}

struct ElectronicResult {
  double snr = 0.0;
  ElectronicBudget budget;
};

inline ElectronicResult snr_electronic(const Scenario& s, double alpha_L, const ElectronicOptions& opt = {}) {
  const auto b = electronic_budget(s, alpha_L, opt);
  return {b.snr(), b};
}

inline double min_alpha_electronic(const Scenario& s, AlphaMode mode, const ElectronicOptions& opt = {}) {
  if (!(s.laser.power_W > 0.0)) throw domain_error("min_alpha_electronic: P0 must be > 0");
  const auto b = electronic_budget(s, 0.0, opt);
  if (mode == AlphaMode::rin_only) return b.xi_eff_rtHz * std::sqrt(s.detector.bandwidth_Hz);
  return std::sqrt(b.noise()) / (b.responsivity_A_per_W * s.laser.power_W);
}

}  // namespace fmscant
