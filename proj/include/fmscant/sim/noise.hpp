#pragma once

// Seeded noise generators for the time-domain simulator. All frequencies are
// converted to rad/s here; densities are one-sided, per Hz.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "fmscant/core.hpp"

namespace fmscant::sim {

using Rng = std::mt19937_64;

// Stream splitting: one generator per (seed, stream) pair. Trials use
// seed + trial index; the stream id separates noise channels within a trial.
inline Rng make_rng(std::uint64_t seed, std::uint32_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

// Zero-mean Gaussian samples with one-sided density `density` (units^2/Hz),
// held constant over each step: per-sample variance density / (2 dt).
inline std::vector<double> white_noise_series(double density, double dt, std::size_t n, Rng& rng) {
  std::vector<double> out(n, 0.0);
  if (density <= 0.0) return out;
  std::normal_distribution<double> normal(0.0, std::sqrt(density / (2.0 * dt)));
  for (auto& v : out) v = normal(rng);
  return out;
}

// Langevin force with S_F = 4 k_B T k / (Q omega_0), omega_0 in rad/s, which
// gives the equipartition variance k_B T / k in the displacement.
inline double thermal_force_density(const Cantilever& c) {
  return 4.0 * constants::k_B * c.temperature_K * c.spring_N_per_m / (c.quality * to_angular(c.omega_0));
}

inline std::vector<double> thermal_force_series(const Cantilever& c, double dt, std::size_t n, std::uint64_t seed) {
  if (!(dt > 0.0)) throw domain_error("thermal_force_series: dt must be > 0");
  auto rng = make_rng(seed);
  return white_noise_series(thermal_force_density(c), dt, n, rng);
}

// One-sided density actually produced by colored_noise_series at an angular
// frequency: the target Lorentzian plus its image at -omega_L.
inline double colored_noise_density(const RinSpectrum& r, double P0, double omega_rad_s) {
  const double g = to_angular(r.gamma);
  const double wl = to_angular(r.omega_L);
  const double a = P0 * r.xi_peak_rtHz;
  const double dm = omega_rad_s - wl;
  const double dp = omega_rad_s + wl;
  return a * a * g * g * (1.0 / (g * g + dm * dm) + 1.0 / (g * g + dp * dp));
}

// Power fluctuation with one-sided density ~ (P0 xi)^2 G^2/(G^2 + (w - wL)^2).
//
// A circular complex Ornstein-Uhlenbeck process z with rate G and
// E|z|^2 = (P0 xi)^2 G is advanced with its exact one-step update and
// shifted up to omega_L; the output is Re(z e^{i wL t}). The realised
// spectrum also contains the mirror Lorentzian at -omega_L, which is
// negligible once omega_L >> G.
inline std::vector<double> colored_noise_series(const RinSpectrum& r, double P0, double dt, std::size_t n,
                                                std::uint64_t seed) {
  if (!(dt > 0.0)) throw domain_error("colored_noise_series: dt must be > 0");
  std::vector<double> out(n, 0.0);
  const double amp = P0 * r.xi_peak_rtHz;
  if (amp == 0.0 || n == 0) return out;

  const double g = to_angular(r.gamma);
  const double wl = to_angular(r.omega_L);
  const double var = amp * amp * g;  // E|z|^2
  const double a = std::exp(-g * dt);
  const double kick = std::sqrt(var * (1.0 - a * a) / 2.0);  // per real component

  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s0 = std::sqrt(var / 2.0);
  std::complex<double> z(s0 * normal(rng), s0 * normal(rng));
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = wl * static_cast<double>(i) * dt;
    out[i] = z.real() * std::cos(phase) - z.imag() * std::sin(phase);
    const double re = normal(rng);
    const double im = normal(rng);
    z = a * z + std::complex<double>(kick * re, kick * im);
  }
  return out;
}

}  // namespace fmscant::sim
