#pragma once

// Domain value types, physical constants and scenario validation shared by
// every other part of the library.
//
// Frequency convention: every omega_* field holds a "paper-unit" frequency,
// i.e. the number that is plugged straight into the closed-form noise
// expressions without a 2*pi factor (a 20 MHz cantilever is stored as 2e7).
// Code that needs physical dynamics converts with to_angular().

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fmscant {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double c = 2.998e8;        // m/s
inline constexpr double k_B = 1.381e-23;    // J/K
inline constexpr double e = 1.602e-19;      // C
inline constexpr double hbar = 1.055e-34;   // J s
}  // namespace constants

// Thrown when an operation is called outside its mathematical domain.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unknown parameter path, metric name or unparsable configuration input.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative method fails or a result is not finite.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double to_angular(double paper_frequency) { return kTwoPi * paper_frequency; }
inline constexpr double from_angular(double angular) { return angular / kTwoPi; }

// Lorentzian-peaked relative intensity noise, P_N = P0*xi*sqrt(G^2/(G^2+(wL-w)^2)).
struct RinSpectrum {
  double xi_peak_rtHz = 0.0;
  double omega_L = 0.0;
  double gamma = 1.0;  // half-width
};

struct LaserSource {
  double power_W = 0.0;
  double wavelength_m = 680e-9;
  RinSpectrum rin;
  double broadband_rin_rtHz = 0.0;  // flat RIN floor
};

struct ModulationSpec {
  double omega_mod = 0.0;
  double index = 0.0;
  double source_quality = 0.0;  // 0 = not specified
  bool has_source_quality() const { return source_quality != 0.0; }
};

struct AbsorberLine {
  double omega_a = 0.0;
  double gamma_a = 1.0;  // HWHM
  double alpha_L_peak = 0.0;
  double carrier_detuning = 0.0;  // omega_c - omega_a
};

struct Cantilever {
  double spring_N_per_m = 0.0;
  double quality = 0.0;
  double omega_0 = 0.0;
  double reflectivity = 0.0;
  double temperature_K = 0.0;
  double force_enhancement = 1.0;
};

struct DetectorChain {
  double quantum_efficiency = 1.0;
  double load_resistance_ohm = 50.0;
  std::vector<double> stage_noise_figures_dB;
  double bandwidth_Hz = 1.0;
  // The cantilever temperature does not apply to the electronics.
  double temperature_K = 300.0;
};

struct Scenario {
  LaserSource laser;
  ModulationSpec modulation;
  AbsorberLine absorber;
  Cantilever cantilever;
  DetectorChain detector;
};

// One broken invariant. `field` is the parameter path (see parameters.hpp).
struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

enum class Scheme {
  any,         // component invariants only
  cantilever,  // additionally requires the modulation to drive the resonance
};

// A Scenario that has passed validate_scenario(). Only constructible through it.
class ValidatedScenario {
 public:
  const Scenario& scenario() const { return scenario_; }
  operator const Scenario&() const { return scenario_; }
  Scheme scheme() const { return scheme_; }

 private:
  ValidatedScenario(Scenario s, Scheme scheme) : scenario_(std::move(s)), scheme_(scheme) {}
  friend std::variant<ValidatedScenario, std::vector<Violation>> validate_scenario(const Scenario&, Scheme);

  Scenario scenario_;
  Scheme scheme_;
};

inline bool resonant_drive(const Scenario& s, double rel_tol = 1e-9) {
  const double w0 = s.cantilever.omega_0;
  return std::abs(s.modulation.omega_mod - w0) <= rel_tol * std::abs(w0);
}

// Collects every violated invariant rather than stopping at the first one.
inline std::variant<ValidatedScenario, std::vector<Violation>> validate_scenario(const Scenario& s,
                                                                                 Scheme scheme = Scheme::any) {
  std::vector<Violation> out;
  auto require = [&out](bool ok, const char* field, const char* message) {
    if (!ok) out.push_back({field, message});
  };
  // Comparisons are written so that NaN fails them.
  const auto& L = s.laser;
  require(L.power_W > 0.0, "laser.power_W", "laser.power_W must be > 0");
  require(L.wavelength_m > 0.0, "laser.wavelength_m", "laser.wavelength_m must be > 0");
  require(L.broadband_rin_rtHz >= 0.0, "laser.broadband_rin_rtHz", "laser.broadband_rin_rtHz must be >= 0");
  require(L.rin.xi_peak_rtHz >= 0.0, "rin.xi_peak_rtHz", "rin.xi_peak_rtHz must be >= 0");
  require(L.rin.gamma > 0.0, "rin.gamma_paperHz", "rin.gamma must be > 0");
  require(std::isfinite(L.rin.omega_L), "rin.omega_L_paperHz", "rin.omega_L must be finite");

  const auto& M = s.modulation;
  require(M.omega_mod > 0.0, "modulation.omega_mod_paperHz", "modulation.omega_mod must be > 0");
  require(M.index >= 0.0, "modulation.index", "modulation.index must be >= 0");
  require(M.source_quality >= 0.0, "modulation.source_quality",
          "modulation.source_quality must be > 0 when present");

  const auto& A = s.absorber;
  require(A.gamma_a > 0.0, "absorber.gamma_a_paperHz", "absorber.gamma_a must be > 0");
  require(A.alpha_L_peak >= 0.0, "absorber.alpha_L_peak", "absorber.alpha_L_peak must be >= 0");
  require(std::isfinite(A.carrier_detuning), "absorber.carrier_detuning_paperHz",
          "absorber.carrier_detuning must be finite");
  require(std::isfinite(A.omega_a), "absorber.omega_a_paperHz", "absorber.omega_a must be finite");

  const auto& C = s.cantilever;
  require(C.spring_N_per_m > 0.0, "cantilever.spring_N_per_m", "cantilever.spring_N_per_m must be > 0");
  require(C.quality > 0.0, "cantilever.quality", "cantilever.quality must be > 0");
  require(C.omega_0 > 0.0, "cantilever.omega_0_paperHz", "cantilever.omega_0 must be > 0");
  require(C.reflectivity >= 0.0 && C.reflectivity <= 1.0, "cantilever.reflectivity",
          "cantilever.reflectivity ∈ [0,1]");
  require(C.temperature_K > 0.0, "cantilever.temperature_K", "cantilever.temperature_K must be > 0");
  require(C.force_enhancement >= 1.0, "cantilever.force_enhancement", "cantilever.force_enhancement must be >= 1");

  const auto& D = s.detector;
  require(D.quantum_efficiency > 0.0 && D.quantum_efficiency <= 1.0, "detector.quantum_efficiency",
          "detector.quantum_efficiency ∈ (0,1]");
  require(D.load_resistance_ohm > 0.0, "detector.load_resistance_ohm", "detector.load_resistance_ohm must be > 0");
  require(D.bandwidth_Hz > 0.0, "detector.bandwidth_Hz", "detector.bandwidth_Hz must be > 0");
  require(D.temperature_K >= 0.0, "detector.temperature_K", "detector.temperature_K must be >= 0");
  for (std::size_t i = 0; i < D.stage_noise_figures_dB.size(); ++i) {
    if (!(D.stage_noise_figures_dB[i] >= 0.0)) {
      out.push_back({"detector.nf" + std::to_string(i + 1) + "_dB",
                     "detector.nf" + std::to_string(i + 1) + "_dB must be >= 0"});
    }
  }

  if (scheme == Scheme::cantilever && C.omega_0 > 0.0 && M.omega_mod > 0.0) {
    require(resonant_drive(s), "modulation.omega_mod_paperHz",
            "modulation.omega_mod must equal cantilever.omega_0 (resonant drive)");
  }

  if (!out.empty()) return out;
  return ValidatedScenario(s, scheme);
}

// Throws domain_error listing every violation.
inline ValidatedScenario require_valid(const Scenario& s, Scheme scheme = Scheme::any) {
  auto r = validate_scenario(s, scheme);
  if (auto* v = std::get_if<ValidatedScenario>(&r)) return *v;
  std::string msg = "invalid scenario:";
  for (const auto& v : std::get<std::vector<Violation>>(r)) msg += "\n  " + v.message;
  throw domain_error(msg);
}

// Optical photon energy 2*pi*hbar*c/lambda in J.
inline double photon_energy(double wavelength_m) {
  if (!(wavelength_m > 0.0)) throw domain_error("photon_energy: wavelength must be > 0");
  return kTwoPi * constants::hbar * constants::c / wavelength_m;
}

}  // namespace fmscant
