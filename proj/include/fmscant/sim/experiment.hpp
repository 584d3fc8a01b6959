#pragma once

// Monte-Carlo realisation of the cantilever SNR: synthesise the transmitted
// power with its noise, drive the oscillator by radiation pressure plus the
// Langevin force, demodulate at the resonance and compare against the
// closed-form budget evaluated in the angular convention.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fmscant/analysis.hpp"
#include "fmscant/cantilever.hpp"
#include "fmscant/core.hpp"
#include "fmscant/optics.hpp"
#include "fmscant/parameters.hpp"
#include "fmscant/sim/lockin.hpp"
#include "fmscant/sim/noise.hpp"
#include "fmscant/sim/oscillator.hpp"

namespace fmscant::sim {

struct ChannelSet {
  bool thermal = true;
  bool rin = true;
  bool shot = true;

  std::size_t count() const { return std::size_t{thermal} + std::size_t{rin} + std::size_t{shot}; }
};

struct SimConfig {
  double dt_s = 0.0;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  double burn_in_s = 0.0;
  ChannelSet channels;
  double lockin_tau_s = 0.0;  // 0 selects 10 reference periods
  SignalSource signal = SignalSource::paper;
  unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it
};

inline double resonance_period(const Scenario& s) { return 1.0 / s.cantilever.omega_0; }
inline double ring_time(const Scenario& s) { return 2.0 * s.cantilever.quality / to_angular(s.cantilever.omega_0); }

inline double effective_lockin_tau(const Scenario& s, const SimConfig& cfg) {
  return cfg.lockin_tau_s > 0.0 ? cfg.lockin_tau_s : 10.0 * resonance_period(s);
}

// 64 steps per period, 10 ring-up times of burn-in, 40 ring times measured.
inline SimConfig default_sim_config(const Scenario& s, std::uint64_t seed = 1) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.dt_s = resonance_period(s) / 64.0;
  cfg.burn_in_s = 10.0 * ring_time(s);
  cfg.duration_s = cfg.burn_in_s + 5.0 * effective_lockin_tau(s, cfg) + 40.0 * ring_time(s);
  return cfg;
}

inline std::vector<Violation> validate_sim_config(const Scenario& s, const SimConfig& cfg) {
  std::vector<Violation> out;
  if (!(cfg.dt_s > 0.0)) out.push_back({"sim.dt_s", "sim.dt_s must be > 0"});
  if (!(cfg.burn_in_s >= 0.0)) out.push_back({"sim.burn_in_s", "sim.burn_in_s must be >= 0"});
  if (!(cfg.duration_s > cfg.burn_in_s)) out.push_back({"sim.duration_s", "sim.duration_s must exceed sim.burn_in_s"});
  if (cfg.dt_s > resonance_period(s) / 20.0 * (1.0 + 1e-12)) {
    out.push_back({"sim.dt_s", "sim.dt_s must give at least 20 samples per resonant period"});
  }
  const double tau = effective_lockin_tau(s, cfg);
  if (tau < 10.0 * resonance_period(s) * (1.0 - 1e-12)) {
    out.push_back({"sim.lockin_tau_s", "sim.lockin_tau_s must span at least 10 resonant periods"});
  }
  if (!(cfg.duration_s > cfg.burn_in_s + 5.0 * tau)) {
    out.push_back({"sim.duration_s", "sim.duration_s must exceed burn-in + 5 lock-in time constants"});
  }
  return out;
}

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct ChannelResult {
  Estimate noise_rms_m;       // referred to the mechanical bandwidth
  double raw_mean_square = 0.0;  // as seen through the lock-in
  double analytic_rms_m = 0.0;
};

struct ExperimentResult {
  std::size_t trials = 0;
  double lockin_tau_s = 0.0;
  double capture_fraction = 1.0;

  Estimate signal_amplitude_m;
  double analytic_signal_m = 0.0;

  ChannelResult thermal;
  ChannelResult shot;
  ChannelResult rin;
  ChannelResult combined;  // all enabled channels at once

  Estimate thermal_variance_m2;  // stationary x variance, thermal channel alone
  double equipartition_variance_m2 = 0.0;

  Estimate snr;                // signal^2 / sum of per-channel noise^2
  double snr_combined = 0.0;   // signal^2 / combined noise^2
  double analytic_snr = 0.0;
};

namespace detail {

enum Stream : std::uint32_t { kThermalStream = 1, kShotStream = 2, kRinWhiteStream = 3, kRinPeakStream = 4 };

// Force series for one run. Noise streams depend only on (trial seed,
// channel), so a channel sees the same realisation alone or combined.
inline std::vector<double> force_series(const Scenario& s, const SimConfig& cfg, std::size_t n,
                                        std::uint64_t trial_seed, ChannelSet on, bool with_signal) {
  const auto& c = s.cantilever;
  const double P0 = s.laser.power_W;
  const double coupling = c.force_enhancement * (1.0 + c.reflectivity) / constants::c;
  const double dt = cfg.dt_s;

  std::vector<double> power(n, P0);
  if (with_signal) {
    if (cfg.signal == SignalSource::paper) {
      const double w = to_angular(s.modulation.omega_mod);
      const double amp = s.absorber.alpha_L_peak * P0;
      for (std::size_t i = 0; i < n; ++i) power[i] += amp * std::cos(w * static_cast<double>(i) * dt);
    } else {
      power = transmitted_power_series(s, dt, n);
    }
  }
  if (on.shot) {
    auto rng = make_rng(trial_seed, kShotStream);
    const auto shot = white_noise_series(P0 * photon_energy(s.laser.wavelength_m), dt, n, rng);
    for (std::size_t i = 0; i < n; ++i) power[i] += shot[i];
  }
  if (on.rin) {
    const double flat = P0 * s.laser.broadband_rin_rtHz;
    auto rng = make_rng(trial_seed, kRinWhiteStream);
    const auto white = white_noise_series(flat * flat, dt, n, rng);
    const auto peak = colored_noise_series(s.laser.rin, P0, dt, n, trial_seed ^ (std::uint64_t{kRinPeakStream} << 56));
    for (std::size_t i = 0; i < n; ++i) power[i] += white[i] + peak[i];
  }
  std::vector<double> force(n);
  for (std::size_t i = 0; i < n; ++i) force[i] = coupling * power[i];
  if (on.thermal) {
    auto rng = make_rng(trial_seed, kThermalStream);
    const auto th = white_noise_series(thermal_force_density(c), dt, n, rng);
    for (std::size_t i = 0; i < n; ++i) force[i] += th[i];
  }
  return force;
}

struct RunOutput {
  LockInResult lockin;
  double variance = 0.0;  // of x after burn-in
};

inline RunOutput simulate_run(const Scenario& s, const SimConfig& cfg, std::size_t n, std::uint64_t trial_seed,
                              ChannelSet on, bool with_signal) {
  const auto force = force_series(s, cfg, n, trial_seed, on, with_signal);
  const auto& c = s.cantilever;
  // Start at the static deflection under the mean radiation force.
  const OscillatorState x0{radiation_force(s.laser.power_W, c.reflectivity, c.force_enhancement) / c.spring_N_per_m,
                           0.0};
  Trajectory traj = propagate_oscillator(c, force, cfg.dt_s, x0);
  traj.seed = trial_seed;

  // AC coupling: remove the static deflection so its mixing product cannot
  // leak through the finite low-pass into the noise estimates.
  const auto first = static_cast<std::size_t>(std::ceil(cfg.burn_in_s / cfg.dt_s));
  double mean = 0.0;
  for (std::size_t i = first; i < n; ++i) mean += traj.samples[i];
  mean /= static_cast<double>(n - first);
  double var = 0.0;
  for (auto& x : traj.samples) x -= mean;
  for (std::size_t i = first; i < n; ++i) var += traj.samples[i] * traj.samples[i];

  RunOutput out;
  out.variance = var / static_cast<double>(n - first);
  out.lockin = lock_in_demodulate(traj, to_angular(s.modulation.omega_mod), effective_lockin_tau(s, cfg), cfg.burn_in_s);
  return out;
}

inline Estimate mean_and_error(const std::vector<double>& v) {
  Estimate e;
  if (v.empty()) return e;
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  e.value = m;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    e.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

// rms estimate from per-trial mean squares; error propagated from the mean.
inline Estimate rms_from_mean_squares(const std::vector<double>& ms, double scale) {
  Estimate m = mean_and_error(ms);
  Estimate r;
  r.value = std::sqrt(m.value / scale);
  r.std_error = m.value > 0.0 ? 0.5 * r.value * m.std_error / m.value : 0.0;
  return r;
}

}  // namespace detail

// Analytic counterpart: angular convention, equipartition thermal amplitude.
inline NoiseBudget analytic_sim_budget(const Scenario& s, SignalSource signal, ChannelSet on) {
  BudgetOptions opt;
  opt.convention = FrequencyConvention::angular;
  opt.thermal_mode = ThermalMode::equipartition;
  opt.signal = signal;
  opt.terms = {on.thermal, on.shot, on.rin};
  return noise_budget(s, opt);
}

inline ExperimentResult run_experiment(const Scenario& s, const SimConfig& cfg, std::size_t n_trials) {
  require_valid(s, Scheme::cantilever);
  if (const auto bad = validate_sim_config(s, cfg); !bad.empty()) {
    std::string msg = "invalid simulation config:";
    for (const auto& v : bad) msg += "\n  " + v.message;
    throw domain_error(msg);
  }
  if (n_trials < 1) throw domain_error("run_experiment: need at least one trial");

  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s / cfg.dt_s));
  const double tau = effective_lockin_tau(s, cfg);
  const double capture = lock_in_capture_fraction(to_angular(s.cantilever.omega_0), s.cantilever.quality, tau);
  const ChannelSet on = cfg.channels;
  const ChannelSet thermal_only{true, false, false};
  const ChannelSet shot_only{false, false, true};
  const ChannelSet rin_only{false, true, false};

  std::vector<double> sig(n_trials), th(n_trials), sh(n_trials), rn(n_trials), all(n_trials), var(n_trials);
  std::vector<double> sig_i(n_trials), sig_q(n_trials);
  fmscant::detail::parallel_for(
      n_trials,
      [&](std::size_t t) {
        const std::uint64_t seed = cfg.seed + t;
        const auto signal = detail::simulate_run(s, cfg, n, seed, on, true);
        sig_i[t] = signal.lockin.i;
        sig_q[t] = signal.lockin.q;
        sig[t] = signal.lockin.amplitude();
        if (on.thermal) {
          const auto r = detail::simulate_run(s, cfg, n, seed, thermal_only, false);
          th[t] = r.lockin.mean_square;
          var[t] = r.variance;
        }
        if (on.shot) sh[t] = detail::simulate_run(s, cfg, n, seed, shot_only, false).lockin.mean_square;
        if (on.rin) rn[t] = detail::simulate_run(s, cfg, n, seed, rin_only, false).lockin.mean_square;
        if (on.count() > 1) all[t] = detail::simulate_run(s, cfg, n, seed, on, false).lockin.mean_square;
      },
      cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads);

  ExperimentResult r;
  r.trials = n_trials;
  r.lockin_tau_s = tau;
  r.capture_fraction = capture;
  r.signal_amplitude_m = detail::mean_and_error(sig);

  const NoiseBudget expect = analytic_sim_budget(s, cfg.signal, on);
  r.analytic_signal_m = expect.x_sig_m;
  r.equipartition_variance_m2 = constants::k_B * s.cantilever.temperature_K / s.cantilever.spring_N_per_m;

  auto fill = [&](ChannelResult& ch, bool enabled, const std::vector<double>& ms, double analytic) {
    ch.analytic_rms_m = analytic;
    if (!enabled) return;
    ch.noise_rms_m = detail::rms_from_mean_squares(ms, capture);
    ch.raw_mean_square = detail::mean_and_error(ms).value;
  };
  fill(r.thermal, on.thermal, th, expect.x_T_m);
  fill(r.shot, on.shot, sh, expect.x_SN_m);
  fill(r.rin, on.rin, rn, expect.x_N_m);
  if (on.count() > 1) {
    fill(r.combined, true, all, std::sqrt(expect.noise_ms()));
  } else {
    r.combined = on.thermal ? r.thermal : on.shot ? r.shot : r.rin;
    r.combined.analytic_rms_m = std::sqrt(expect.noise_ms());
  }
  if (on.thermal) r.thermal_variance_m2 = detail::mean_and_error(var);

  double noise_ms = 0.0;
  double noise_ms_var = 0.0;
  for (const ChannelResult* ch : {&r.thermal, &r.shot, &r.rin}) {
    const double v = ch->noise_rms_m.value;
    noise_ms += v * v;
    const double e = 2.0 * v * ch->noise_rms_m.std_error;
    noise_ms_var += e * e;
  }
  const double A = r.signal_amplitude_m.value;
  if (noise_ms > 0.0) {
    r.snr.value = A * A / noise_ms;
    const double rel_sig = A > 0.0 ? 2.0 * r.signal_amplitude_m.std_error / A : 0.0;
    const double rel_noise = std::sqrt(noise_ms_var) / noise_ms;
    r.snr.std_error = r.snr.value * std::hypot(rel_sig, rel_noise);
    const double comb = r.combined.noise_rms_m.value;
    r.snr_combined = A * A / (comb * comb);
  } else {
    r.snr.value = std::numeric_limits<double>::infinity();
    r.snr_combined = std::numeric_limits<double>::infinity();
  }
  r.analytic_snr = on.count() > 0 ? expect.snr() : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace fmscant::sim
