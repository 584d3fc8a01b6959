#pragma once

// Cross-scheme comparison, noise-dominance classification, single-axis
// parameter sweeps and resonance-frequency optimisation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fmscant/cantilever.hpp"
#include "fmscant/core.hpp"
#include "fmscant/electronic.hpp"
#include "fmscant/parameters.hpp"

namespace fmscant {

enum class NoiseSource { thermal, shot, rin };

inline std::string_view to_string(NoiseSource n) {
  switch (n) {
    case NoiseSource::thermal: return "thermal";
    case NoiseSource::shot: return "shot";
    case NoiseSource::rin: return "rin";
  }
  return "?";
}

// Published RIN level above which laser noise is said to dominate for the
// 4 K / 20 MHz parameter set. Kept for side-by-side reporting only.
inline constexpr double kPublishedRinThreshold_rtHz = 1.8e-5;

struct DominanceReport {
  NoiseSource dominant = NoiseSource::thermal;
  double xi_crossover_rtHz = 0.0;             // x_N = max(x_T, x_SN)
  double xi_crossover_quadrature_rtHz = 0.0;  // x_N^2 = x_T^2 + x_SN^2
  double published_threshold_rtHz = kPublishedRinThreshold_rtHz;
  double published_ratio = 0.0;  // published / derived
  std::string note;
};

inline DominanceReport dominance_analysis(const Scenario& s, const BudgetOptions& opt = {}) {
  const NoiseBudget b = noise_budget(s, opt);
  const double t2 = b.x_T_m * b.x_T_m;
  const double s2 = b.x_SN_m * b.x_SN_m;
  const double n2 = b.x_N_m * b.x_N_m;

  DominanceReport r;
  if (n2 >= t2 && n2 >= s2) r.dominant = NoiseSource::rin;
  else if (t2 >= s2) r.dominant = NoiseSource::thermal;
  else r.dominant = NoiseSource::shot;

  // x_N is linear in xi(omega_0): x_N = xi * P0 * sqrt(Q (1+R)^2 w0) / (k c)
  const auto& c = s.cantilever;
  const double coupling = (1.0 + c.reflectivity) * c.force_enhancement;
  const double per_xi = std::sqrt(c.quality * coupling * coupling * noise_bandwidth_omega(c, opt.convention)) *
                        s.laser.power_W / (c.spring_N_per_m * constants::c);
  r.xi_crossover_rtHz = std::max(b.x_T_m, b.x_SN_m) / per_xi;
  r.xi_crossover_quadrature_rtHz = std::sqrt(t2 + s2) / per_xi;
  r.published_ratio = r.published_threshold_rtHz / r.xi_crossover_rtHz;
  r.note = "derived RIN crossover " + format_number(r.xi_crossover_rtHz) +
           " Hz^-1/2 differs from the published threshold 1.8e-5 Hz^-1/2 by a factor of " +
           format_number(r.published_ratio) + "; reported side by side, not reconciled";
  return r;
}

struct SchemeComparison {
  double cantilever_rin_only = 0.0;
  double electronic_rin_only = 0.0;
  double cantilever_full = 0.0;
  double electronic_full = 0.0;
  double ratio_rin_only = 0.0;  // cantilever / electronic
  double ratio_full = 0.0;
};

// Minimum detectable absorbance of the cantilever scheme (first scenario)
// relative to the electronic scheme (second scenario).
inline SchemeComparison compare_schemes(const Scenario& cantilever_side, const Scenario& electronic_side) {
  SchemeComparison r;
  r.cantilever_rin_only = min_alpha_cantilever(cantilever_side, AlphaMode::rin_only);
  r.cantilever_full = min_alpha_cantilever(cantilever_side, AlphaMode::full);
  r.electronic_rin_only = min_alpha_electronic(electronic_side, AlphaMode::rin_only);
  r.electronic_full = min_alpha_electronic(electronic_side, AlphaMode::full);
  r.ratio_rin_only = r.cantilever_rin_only / r.electronic_rin_only;
  r.ratio_full = r.cantilever_full / r.electronic_full;
  return r;
}

inline SchemeComparison compare_schemes(const Scenario& s) { return compare_schemes(s, s); }

// ---------------------------------------------------------------------------
// Metrics

struct Metric {
  std::string_view name;
  std::string_view unit;
  std::function<double(const Scenario&)> eval;
};

inline const std::vector<Metric>& metrics() {
  static const std::vector<Metric> all = {
      {"min_alpha_cantilever_rin_only", "1",
       [](const Scenario& s) { return min_alpha_cantilever(s, AlphaMode::rin_only); }},
      {"min_alpha_cantilever_full", "1", [](const Scenario& s) { return min_alpha_cantilever(s, AlphaMode::full); }},
      {"min_alpha_electronic_rin_only", "1",
       [](const Scenario& s) { return min_alpha_electronic(s, AlphaMode::rin_only); }},
      {"min_alpha_electronic_full", "1", [](const Scenario& s) { return min_alpha_electronic(s, AlphaMode::full); }},
      {"snr_cantilever", "1", [](const Scenario& s) { return snr_cantilever(s); }},
      {"snr_electronic", "1", [](const Scenario& s) { return snr_electronic(s, s.absorber.alpha_L_peak).snr; }},
      {"scheme_ratio_rin_only", "1", [](const Scenario& s) { return compare_schemes(s).ratio_rin_only; }},
      {"scheme_ratio_full", "1", [](const Scenario& s) { return compare_schemes(s).ratio_full; }},
      {"xi_crossover", "Hz^-1/2", [](const Scenario& s) { return dominance_analysis(s).xi_crossover_rtHz; }},
      {"thermal_limit_lhs", "Hz^-1/2", [](const Scenario& s) { return thermal_limit_margin(s).lhs; }},
      {"thermal_limit_rhs", "Hz^-1/2", [](const Scenario& s) { return thermal_limit_margin(s).rhs; }},
      {"thermal_limit_margin", "Hz^-1/2",
       [](const Scenario& s) {
         const auto r = thermal_limit_margin(s);
         return r.rhs - r.lhs;
       }},
      {"x_sig", "m", [](const Scenario& s) { return noise_budget(s).x_sig_m; }},
      {"x_T", "m", [](const Scenario& s) { return noise_budget(s).x_T_m; }},
      {"x_SN", "m", [](const Scenario& s) { return noise_budget(s).x_SN_m; }},
      {"x_N", "m", [](const Scenario& s) { return noise_budget(s).x_N_m; }},
      {"thermal_force_sensitivity", "N Hz^-1/2",
       [](const Scenario& s) { return thermal_force_sensitivity(s.cantilever); }},
  };
  return all;
}

inline const Metric& find_metric(std::string_view name) {
  for (const auto& m : metrics()) {
    if (m.name == name) return m;
  }
  throw config_error("unknown metric '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
  std::string path;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 2;
  bool log = false;
};

struct SweepTable {
  std::string axis_name;
  std::vector<double> axis_values;
  std::string metric_name;
  std::vector<double> metric_values;
  std::uint64_t scenario_fingerprint = 0;
};

namespace detail {

inline bool is_resonance_key(std::string_view path) {
  return path == "cantilever.omega_0_paperHz" || path == "cantilever.omega_0_rad_per_s";
}

// Moving the resonance drags a resonant modulation along with it.
inline Scenario with_parameter(const Scenario& base, std::string_view path, double value) {
  Scenario s = base;
  const bool track = is_resonance_key(path) && resonant_drive(base);
  set_parameter(s, path, value);
  if (track) s.modulation.omega_mod = s.cantilever.omega_0;
  return s;
}

inline std::vector<double> axis_grid(const SweepAxis& a) {
  std::vector<double> v(a.count);
  const double n1 = static_cast<double>(a.count - 1);
  if (a.log) {
    const double l0 = std::log(a.min);
    const double l1 = std::log(a.max);
    for (std::size_t i = 0; i < a.count; ++i) v[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / n1);
  } else {
    for (std::size_t i = 0; i < a.count; ++i) v[i] = a.min + (a.max - a.min) * static_cast<double>(i) / n1;
  }
  v.front() = a.min;
  v.back() = a.max;
  return v;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is
// written by exactly one worker so the output order never depends on timing.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = std::thread::hardware_concurrency()) {
  threads = std::max(1u, std::min<unsigned>(threads == 0 ? 1u : threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

inline SweepTable sweep(const Scenario& s, const SweepAxis& axis, std::string_view metric_name) {
  if (!is_parameter(axis.path)) throw config_error("unknown parameter path '" + axis.path + "'");
  const Metric& metric = find_metric(metric_name);
  if (axis.count < 2) throw config_error("sweep: count must be >= 2");
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || !(axis.min < axis.max)) {
    throw config_error("sweep: axis bounds must be finite with min < max");
  }
  if (axis.log && !(axis.min > 0.0)) throw config_error("sweep: log axis needs min > 0");

  SweepTable t;
  t.axis_name = axis.path;
  t.metric_name = metric.name;
  t.scenario_fingerprint = scenario_fingerprint(s);
  t.axis_values = detail::axis_grid(axis);
  t.metric_values.assign(t.axis_values.size(), 0.0);
  detail::parallel_for(t.axis_values.size(), [&](std::size_t i) {
    t.metric_values[i] = metric.eval(detail::with_parameter(s, axis.path, t.axis_values[i]));
  });
  for (std::size_t i = 0; i < t.metric_values.size(); ++i) {
    if (!std::isfinite(t.metric_values[i])) {
      throw numeric_error("sweep: metric " + t.metric_name + " is not finite at " + axis.path + " = " +
                          format_number(t.axis_values[i]));
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Resonance optimisation

struct ResonanceOptimum {
  bool feasible = false;
  double omega_0 = 0.0;
  double min_alpha = 0.0;
  std::size_t evaluations = 0;
};

struct OptimizeOptions {
  bool require_thermal_limit = true;
  std::size_t scan_points = 64;
  double log_tolerance = 1e-9;  // golden-section stop, in ln(omega_0)
};

// Minimises the full-mode minimum detectable absorbance over omega_0 in
// [lo, hi], optionally subject to the thermal-limit condition. A log-spaced
// scan brackets the best feasible grid point; golden-section search then
// refines inside the neighbouring cells. Infeasible points count as +inf, so
// an optimum pinned against the constraint is approached from the feasible
// side.
inline ResonanceOptimum optimize_resonance(const Scenario& s, double lo, double hi, const OptimizeOptions& opt = {}) {
  if (!(lo > 0.0) || !(lo < hi) || !std::isfinite(hi)) {
    throw domain_error("optimize_resonance: bounds must satisfy 0 < lower < upper");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  ResonanceOptimum best;
  best.min_alpha = inf;

  auto objective = [&](double w) {
    ++best.evaluations;
    const Scenario sw = detail::with_parameter(s, "cantilever.omega_0_paperHz", w);
    if (opt.require_thermal_limit) {
      if (!(sw.cantilever.omega_0 > sw.laser.rin.omega_L)) return inf;
      if (!thermal_limit_margin(sw).satisfied) return inf;
    }
    const double f = min_alpha_cantilever(sw, AlphaMode::full);
    if (f < best.min_alpha) {
      best.min_alpha = f;
      best.omega_0 = w;
      best.feasible = true;
    }
    return f;
  };

  const std::size_t n = std::max<std::size_t>(opt.scan_points, 3);
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  std::vector<double> grid(n), value(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1);
    value[i] = objective(std::exp(grid[i]));
  }
  if (!best.feasible) return best;

  const auto i_best = static_cast<std::size_t>(std::min_element(value.begin(), value.end()) - value.begin());
  double a = grid[i_best == 0 ? 0 : i_best - 1];
  double b = grid[std::min(i_best + 1, n - 1)];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = objective(std::exp(x1));
  double f2 = objective(std::exp(x2));
  const double anchor = grid[i_best];  // feasible; breaks inf/inf ties
  for (int iter = 0; iter < 200 && (b - a) > opt.log_tolerance; ++iter) {
    const bool keep_left = (f1 == inf && f2 == inf) ? anchor < x2 : f1 <= f2;
    if (keep_left) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = objective(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = objective(std::exp(x2));
    }
  }
  return best;
}

}  // namespace fmscant
