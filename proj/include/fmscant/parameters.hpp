#pragma once

// Named numeric Scenario fields ("section.key"), shared by the config
// reader/writer and by single-axis sweeps.
//
// Frequency keys carry their unit in the name: *_paperHz values are stored
// as-is, *_rad_per_s values are divided by 2*pi on the way in.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmscant/core.hpp"

namespace fmscant {

struct Parameter {
  std::string_view key;
  std::string_view unit;
  bool canonical;  // emitted when a scenario is written back
  std::function<double(const Scenario&)> get;
  std::function<void(Scenario&, double)> set;
};

namespace detail {

template <class Member>
Parameter direct(std::string_view key, std::string_view unit, Member member) {
  return {key, unit, true, [member](const Scenario& s) { return member(s); },
          [member](Scenario& s, double v) { member(s) = v; }};
}

template <class Member>
Parameter angular_alias(std::string_view key, Member member) {
  return {key, "rad/s", false, [member](const Scenario& s) { return to_angular(member(s)); },
          [member](Scenario& s, double v) { member(s) = from_angular(v); }};
}

inline const std::vector<Parameter>& fixed_parameters() {
  // clang-format off
  static const std::vector<Parameter> table = [] {
    std::vector<Parameter> t;
    t.push_back(direct("laser.power_W", "W", [](auto& s) -> auto& { return s.laser.power_W; }));
    t.push_back(direct("laser.wavelength_m", "m", [](auto& s) -> auto& { return s.laser.wavelength_m; }));
    t.push_back(direct("laser.broadband_rin_rtHz", "Hz^-1/2", [](auto& s) -> auto& { return s.laser.broadband_rin_rtHz; }));
    t.push_back(direct("rin.xi_peak_rtHz", "Hz^-1/2", [](auto& s) -> auto& { return s.laser.rin.xi_peak_rtHz; }));
    t.push_back(direct("rin.omega_L_paperHz", "paperHz", [](auto& s) -> auto& { return s.laser.rin.omega_L; }));
    t.push_back(angular_alias("rin.omega_L_rad_per_s", [](auto& s) -> auto& { return s.laser.rin.omega_L; }));
    t.push_back(direct("rin.gamma_paperHz", "paperHz", [](auto& s) -> auto& { return s.laser.rin.gamma; }));
    t.push_back(angular_alias("rin.gamma_rad_per_s", [](auto& s) -> auto& { return s.laser.rin.gamma; }));
    t.push_back(direct("modulation.omega_mod_paperHz", "paperHz", [](auto& s) -> auto& { return s.modulation.omega_mod; }));
    t.push_back(angular_alias("modulation.omega_mod_rad_per_s", [](auto& s) -> auto& { return s.modulation.omega_mod; }));
    t.push_back(direct("modulation.index", "1", [](auto& s) -> auto& { return s.modulation.index; }));
    t.push_back(direct("modulation.source_quality", "1", [](auto& s) -> auto& { return s.modulation.source_quality; }));
    t.push_back(direct("absorber.omega_a_paperHz", "paperHz", [](auto& s) -> auto& { return s.absorber.omega_a; }));
    t.push_back(direct("absorber.gamma_a_paperHz", "paperHz", [](auto& s) -> auto& { return s.absorber.gamma_a; }));
    t.push_back(angular_alias("absorber.gamma_a_rad_per_s", [](auto& s) -> auto& { return s.absorber.gamma_a; }));
    t.push_back(direct("absorber.alpha_L_peak", "1", [](auto& s) -> auto& { return s.absorber.alpha_L_peak; }));
    t.push_back(direct("absorber.carrier_detuning_paperHz", "paperHz", [](auto& s) -> auto& { return s.absorber.carrier_detuning; }));
    t.push_back(angular_alias("absorber.carrier_detuning_rad_per_s", [](auto& s) -> auto& { return s.absorber.carrier_detuning; }));
    t.push_back(direct("cantilever.spring_N_per_m", "N/m", [](auto& s) -> auto& { return s.cantilever.spring_N_per_m; }));
    t.push_back(direct("cantilever.quality", "1", [](auto& s) -> auto& { return s.cantilever.quality; }));
    t.push_back(direct("cantilever.omega_0_paperHz", "paperHz", [](auto& s) -> auto& { return s.cantilever.omega_0; }));
    t.push_back(angular_alias("cantilever.omega_0_rad_per_s", [](auto& s) -> auto& { return s.cantilever.omega_0; }));
    t.push_back(direct("cantilever.reflectivity", "1", [](auto& s) -> auto& { return s.cantilever.reflectivity; }));
    t.push_back(direct("cantilever.temperature_K", "K", [](auto& s) -> auto& { return s.cantilever.temperature_K; }));
    t.push_back(direct("cantilever.force_enhancement", "1", [](auto& s) -> auto& { return s.cantilever.force_enhancement; }));
    t.push_back(direct("detector.quantum_efficiency", "1", [](auto& s) -> auto& { return s.detector.quantum_efficiency; }));
    t.push_back(direct("detector.load_resistance_ohm", "ohm", [](auto& s) -> auto& { return s.detector.load_resistance_ohm; }));
    t.push_back(direct("detector.bandwidth_Hz", "Hz", [](auto& s) -> auto& { return s.detector.bandwidth_Hz; }));
    t.push_back(direct("detector.temperature_K", "K", [](auto& s) -> auto& { return s.detector.temperature_K; }));
    return t;
  }();
  // clang-format on
  return table;
}

// "detector.nf<K>_dB" -> K (1-based), or 0.
inline std::size_t noise_figure_stage(std::string_view key) {
  constexpr std::string_view prefix = "detector.nf";
  constexpr std::string_view suffix = "_dB";
  if (!key.starts_with(prefix) || !key.ends_with(suffix)) return 0;
  const auto digits = key.substr(prefix.size(), key.size() - prefix.size() - suffix.size());
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return 0;
  return k;
}

inline constexpr std::string_view kStageCountKey = "detector.nf_stage_count";

}  // namespace detail

inline const Parameter* find_parameter(std::string_view key) {
  for (const auto& p : detail::fixed_parameters()) {
    if (p.key == key) return &p;
  }
  return nullptr;
}

inline bool is_parameter(std::string_view key) {
  return find_parameter(key) != nullptr || key == detail::kStageCountKey || detail::noise_figure_stage(key) > 0;
}

inline std::optional<double> get_parameter(const Scenario& s, std::string_view key) {
  if (const auto* p = find_parameter(key)) return p->get(s);
  const auto& nf = s.detector.stage_noise_figures_dB;
  if (key == detail::kStageCountKey) return static_cast<double>(nf.size());
  if (const auto k = detail::noise_figure_stage(key); k > 0 && k <= nf.size()) return nf[k - 1];
  return std::nullopt;
}

// Noise-figure stages may be appended one past the end; anything further
// out, or an unknown key, is a config_error.
inline void set_parameter(Scenario& s, std::string_view key, double value) {
  if (const auto* p = find_parameter(key)) {
    p->set(s, value);
    return;
  }
  auto& nf = s.detector.stage_noise_figures_dB;
  if (key == detail::kStageCountKey) {
    if (!(value >= 0.0) || value != std::floor(value) || value > 64.0) {
      throw config_error(std::string(key) + ": stage count must be a small non-negative integer");
    }
    nf.resize(static_cast<std::size_t>(value), 0.0);
    return;
  }
  if (const auto k = detail::noise_figure_stage(key); k > 0) {
    if (k > nf.size() + 1) {
      throw config_error(std::string(key) + ": stage " + std::to_string(k) + " given but only " +
                         std::to_string(nf.size()) + " stages defined");
    }
    if (k == nf.size() + 1) nf.push_back(value);
    else nf[k - 1] = value;
    return;
  }
  throw config_error("unknown parameter '" + std::string(key) + "'");
}

// Canonical keys, in writing order, for this scenario.
inline std::vector<std::string> canonical_keys(const Scenario& s) {
  std::vector<std::string> keys;
  for (const auto& p : detail::fixed_parameters()) {
    if (p.canonical) keys.emplace_back(p.key);
  }
  keys.emplace_back(detail::kStageCountKey);
  for (std::size_t k = 1; k <= s.detector.stage_noise_figures_dB.size(); ++k) {
    keys.push_back("detector.nf" + std::to_string(k) + "_dB");
  }
  return keys;
}

inline std::string_view parameter_unit(std::string_view key) {
  if (const auto* p = find_parameter(key)) return p->unit;
  if (key == detail::kStageCountKey) return "1";
  return "dB";
}

}  // namespace fmscant

namespace fmscant {

// Round-trip formatting used wherever a number is written as text.
inline std::string format_number(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

// FNV-1a over the canonical "key=value" lines; stable across platforms.
inline std::uint64_t scenario_fingerprint(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::string_view text) {
    for (unsigned char ch : text) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  for (const auto& key : canonical_keys(s)) {
    mix(key);
    mix("=");
    mix(format_number(*get_parameter(s, key)));
    mix("\n");
  }
  return h;
}

}  // namespace fmscant
