#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "fmscant/core.hpp"
#include "fmscant/sim/oscillator.hpp"

namespace fmscant::sim {

struct LockInResult {
  double i = 0.0;  // mean of LPF(2 x cos(w t)) over the settled window
  double q = 0.0;  // mean of LPF(2 x sin(w t))
  double mean_square = 0.0;  // mean of (I^2 + Q^2)/2 over the same window
  std::size_t settled_samples = 0;

  double amplitude() const { return std::hypot(i, q); }
};

// Mixes the displacement with cos/sin at `ref_omega` (rad/s) and low-passes
// each arm with a single pole of time constant `tau`. Filtering starts at
// `start_s`; the first 5 tau after that are discarded. For x = A cos(w t + p)
// the result is I = A cos p, Q = -A sin p.
inline LockInResult lock_in_demodulate(const Trajectory& traj, double ref_omega, double tau, double start_s = 0.0) {
  if (!(ref_omega > 0.0)) throw domain_error("lock_in_demodulate: reference frequency must be > 0");
  const double period = kTwoPi / ref_omega;
  if (!(tau >= 10.0 * period * (1.0 - 1e-12))) {
    throw domain_error("lock_in_demodulate: time constant must span at least 10 reference periods");
  }
  const double dt = traj.dt_s;
  const auto n = traj.samples.size();
  const auto first = static_cast<std::size_t>(std::ceil(start_s / dt - 1e-9));
  const auto settle = static_cast<std::size_t>(std::ceil(5.0 * tau / dt));
  if (first + settle >= n) {
    throw domain_error("lock_in_demodulate: trajectory shorter than start + 5 time constants");
  }

  const double a = -std::expm1(-dt / tau);
  const std::complex<double> rot = std::polar(1.0, ref_omega * dt);
  std::complex<double> ref = std::polar(1.0, ref_omega * static_cast<double>(first) * dt);
  double yi = 0.0;
  double yq = 0.0;
  double si = 0.0;
  double sq = 0.0;
  double sms = 0.0;
  std::size_t count = 0;
  for (std::size_t k = first; k < n; ++k) {
    if (((k - first) & 1023u) == 0) ref = std::polar(1.0, ref_omega * static_cast<double>(k) * dt);
    const double x2 = 2.0 * traj.samples[k];
    yi += a * (x2 * ref.real() - yi);
    yq += a * (x2 * ref.imag() - yq);
    if (k >= first + settle) {
      si += yi;
      sq += yq;
      sms += 0.5 * (yi * yi + yq * yq);
      ++count;
    }
    ref *= rot;
  }
  LockInResult r;
  r.settled_samples = count;
  r.i = si / static_cast<double>(count);
  r.q = sq / static_cast<double>(count);
  r.mean_square = sms / static_cast<double>(count);
  return r;
}

// Fraction of a resonant oscillator's displacement variance that passes the
// lock-in: the complex envelope relaxes at w0/(2Q), the filter at 1/tau.
inline double lock_in_capture_fraction(double omega0_rad_s, double quality, double tau) {
  return 1.0 / (1.0 + omega0_rad_s * tau / (2.0 * quality));
}

}  // namespace fmscant::sim
