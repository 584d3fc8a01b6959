#pragma once

// Built-in parameter sets.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmscant/core.hpp"

namespace fmscant {

struct Preset {
  std::string_view name;
  std::string_view description;
  Scenario scenario;
};

namespace detail {

inline Scenario paper_main() {
  Scenario s;
  s.laser.power_W = 100e-6;
  s.laser.wavelength_m = 680e-9;  // not given for this parameter set; borrowed from the yang2002 preset
  s.laser.broadband_rin_rtHz = 1.8e-5;
  s.laser.rin = {0.0, 0.3e6, 1e6};

  s.modulation.omega_mod = 2e7;
  s.modulation.index = 0.1;

  // Line width and detuning only matter for the chain-mode drive.
  s.absorber.omega_a = constants::c / s.laser.wavelength_m;
  s.absorber.gamma_a = 2e7;
  s.absorber.alpha_L_peak = 1.8e-4;
  s.absorber.carrier_detuning = 2e7;

  s.cantilever.spring_N_per_m = 0.3;
  s.cantilever.quality = 2e5;
  s.cantilever.omega_0 = 2e7;
  s.cantilever.reflectivity = 0.5;
  s.cantilever.temperature_K = 4.0;
  s.cantilever.force_enhancement = 1.0;

  s.detector.quantum_efficiency = 0.8;
  s.detector.load_resistance_ohm = 50.0;
  s.detector.stage_noise_figures_dB = {2.0, 4.0, 4.0};
  s.detector.bandwidth_Hz = 100.0;
  s.detector.temperature_K = 300.0;
  return s;
}

inline Scenario paper_electronic() {
  Scenario s = paper_main();
  s.modulation.omega_mod = 2e10;
  s.modulation.source_quality = 2e8;
  s.detector.bandwidth_Hz = 2e10 / 2e8;
  return s;
}

inline Scenario paper_eq4() {
  Scenario s = paper_main();
  s.laser.broadband_rin_rtHz = 0.0;
  // Peak RIN chosen so the thermal-limit boundary falls at mu ~ 5.
  s.laser.rin.xi_peak_rtHz = 1.46e-4;
  return s;
}

inline Scenario yang2002() {
  Scenario s = paper_main();
  s.laser.power_W = 40e-6;
  s.laser.wavelength_m = 680e-9;
  s.absorber.omega_a = constants::c / s.laser.wavelength_m;
  s.cantilever.spring_N_per_m = 4.4e-3;
  s.cantilever.quality = 1e5;
  s.cantilever.temperature_K = 300.0;
  s.cantilever.omega_0 = kTwoPi * 1e4;  // assumed 10 kHz resonance
  s.modulation.omega_mod = s.cantilever.omega_0;
  s.absorber.gamma_a = s.cantilever.omega_0;
  s.absorber.carrier_detuning = s.cantilever.omega_0;
  return s;
}

// Desk-scale Monte-Carlo case: 1e5 rad/s resonance, Q = 500, large drive.
inline Scenario scaled_mc() {
  Scenario s = paper_main();
  s.cantilever.omega_0 = from_angular(1e5);
  s.cantilever.quality = 500.0;
  s.modulation.omega_mod = s.cantilever.omega_0;
  s.absorber.gamma_a = s.cantilever.omega_0;
  s.absorber.carrier_detuning = s.cantilever.omega_0;
  s.absorber.alpha_L_peak = 0.08;
  return s;
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"paper-main", "T=4 K, k=0.3 N/m, Q=2e5, R=0.5, P0=100 uW, omega_0=2e7, flat RIN 1.8e-5", detail::paper_main()},
      {"paper-electronic", "paper-main laser with a 2e10 / Q_m=2e8 modulation source, NF 2+4+4 dB, 100 Hz",
       detail::paper_electronic()},
      {"paper-eq4", "paper-main with a Lorentzian RIN peak (omega_L=0.3e6, Gamma=1e6, xi=1.46e-4)",
       detail::paper_eq4()},
      {"yang2002", "k=4.4e-3 N/m, Q=1e5, 680 nm, 40 uW, T=300 K, assumed omega_0=2*pi*1e4", detail::yang2002()},
      {"scaled-mc", "paper-main scaled for Monte-Carlo: omega_0=1e5 rad/s, Q=500, alpha_L=0.08",
       detail::scaled_mc()},
  };
  return all;
}

inline std::optional<Scenario> find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.scenario;
  }
  return std::nullopt;
}

}  // namespace fmscant
