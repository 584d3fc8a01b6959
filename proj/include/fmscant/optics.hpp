#pragma once

// FM laser spectrum, Lorentzian absorber transfer and the AM beat note that
// appears in the transmitted intensity.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fmscant/core.hpp"

namespace fmscant {

struct SpectralComponent {
  int order = 0;
  double amplitude = 0.0;
};

// Sideband field amplitudes J_n(M) for n = -N..N, with J_{-n} = (-1)^n J_n.
// For M == 0 only the carrier is returned.
inline std::vector<SpectralComponent> fm_component_spectrum(double index, int order_cap) {
  if (!(index >= 0.0)) throw domain_error("fm_component_spectrum: modulation index must be >= 0");
  if (order_cap < 1) throw domain_error("fm_component_spectrum: order cap must be >= 1");
  if (index == 0.0) return {{0, 1.0}};
  std::vector<SpectralComponent> out;
  out.reserve(2 * static_cast<std::size_t>(order_cap) + 1);
  for (int n = -order_cap; n <= order_cap; ++n) {
    const int m = std::abs(n);
    double j = std::cyl_bessel_j(static_cast<double>(m), index);
    if (n < 0 && (m % 2) == 1) j = -j;
    out.push_back({n, j});
  }
  return out;
}

struct AbsorberResponse {
  double delta = 0.0;  // field amplitude attenuation
  double phi = 0.0;    // phase shift
};

// Lorentzian line with its Kramers-Kronig dispersion; field transmission is
// exp(-delta - i*phi). `detuning` is measured from line centre.
inline AbsorberResponse absorber_transfer(const AbsorberLine& line, double detuning) {
  if (std::isinf(detuning)) return {0.0, 0.0};
  const double g = line.gamma_a;
  const double denom = g * g + detuning * detuning;
  const double half = 0.5 * line.alpha_L_peak;
  return {half * g * g / denom, half * g * detuning / denom};
}

struct BeatSignal {
  double dc_power_W = 0.0;
  double inphase_W = 0.0;     // cos(Omega t) amplitude
  double quadrature_W = 0.0;  // sin(Omega t) amplitude

  double amplitude_W() const { return std::hypot(inphase_W, quadrature_W); }
};

inline constexpr double kMaxBeatIndex = 0.5;

namespace detail {
// Parity-exact even/odd trig so mirrored inputs give bit-mirrored outputs.
inline double even_cos(double x) { return std::cos(std::abs(x)); }
inline double odd_sin(double x) { return std::signbit(x) ? -std::sin(-x) : std::sin(x); }
}  // namespace detail

// Projection of the carrier + first-sideband intensity onto cos/sin(Omega t).
// To first order in M and delta this reduces to
//   inphase    = P0 M e^{-2 d0} (d_{-1} - d_{+1})
//   quadrature = P0 M e^{-2 d0} (p_{+1} + p_{-1} - 2 p0)
//   dc         = P0 e^{-2 d0}
// but the exact three-component projection is kept so that numerical
// demodulation of the same field agrees to rounding error. The 2*Omega
// sideband-sideband term is dropped.
inline BeatSignal beat_signal(const Scenario& s) {
  const double M = s.modulation.index;
  if (M > kMaxBeatIndex) {
    throw domain_error("beat_signal: modulation index above 0.5; first-order sidebands no longer suffice, "
                       "sample the field with transmitted_power_series-style numerics instead");
  }
  if (!(M >= 0.0)) throw domain_error("beat_signal: modulation index must be >= 0");

  const double P0 = s.laser.power_W;
  const double W = s.modulation.omega_mod;
  const double dc0 = s.absorber.carrier_detuning;
  const auto lo = absorber_transfer(s.absorber, dc0 - W);
  const auto c0 = absorber_transfer(s.absorber, dc0);
  const auto hi = absorber_transfer(s.absorber, dc0 + W);

  const double j0 = std::cyl_bessel_j(0.0, M);
  const double j1 = std::cyl_bessel_j(1.0, M);

  // E = j0 T0 + j1 (T+ e^{iWt} - T- e^{-iWt});  T_n = exp(-d_n - i p_n)
  const double a_hi = std::exp(-c0.delta - hi.delta);
  const double a_lo = std::exp(-c0.delta - lo.delta);
  const double re_hi = a_hi * detail::even_cos(c0.phi - hi.phi);
  const double re_lo = a_lo * detail::even_cos(c0.phi - lo.phi);
  const double im_hi = a_hi * detail::odd_sin(c0.phi - hi.phi);
  const double im_lo = a_lo * detail::odd_sin(c0.phi - lo.phi);

  BeatSignal b;
  // Power outside the first sidebands is lumped with the carrier so that a
  // transparent absorber transmits exactly P0.
  b.dc_power_W = P0 * ((1.0 - 2.0 * j1 * j1) * std::exp(-2.0 * c0.delta) +
                       j1 * j1 * (std::exp(-2.0 * hi.delta) + std::exp(-2.0 * lo.delta)));
  b.inphase_W = 2.0 * P0 * j0 * j1 * (re_hi - re_lo);
  b.quadrature_W = -2.0 * P0 * j0 * j1 * (im_hi + im_lo);
  return b;
}

// Deterministic transmitted power P(t_i), t_i = i*dt, with the modulation
// frequency converted to rad/s.
inline std::vector<double> transmitted_power_series(const Scenario& s, double dt, std::size_t n_samples) {
  if (!(dt > 0.0)) throw domain_error("transmitted_power_series: dt must be > 0");
  if (n_samples < 1) throw domain_error("transmitted_power_series: need at least one sample");
  const BeatSignal b = beat_signal(s);
  const double w = to_angular(s.modulation.omega_mod);
  std::vector<double> out(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) * dt;
    out[i] = b.dc_power_W + b.inphase_W * std::cos(w * t) + b.quadrature_W * std::sin(w * t);
  }
  return out;
}

}  // namespace fmscant
