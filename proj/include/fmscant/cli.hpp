#pragma once

// Command-line front end. run_cli() is the whole tool; tools/main.cpp only
// forwards argv, which keeps every subcommand testable in-process.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmscant/analysis.hpp"
#include "fmscant/cantilever.hpp"
#include "fmscant/config.hpp"
#include "fmscant/core.hpp"
#include "fmscant/electronic.hpp"
#include "fmscant/sim/experiment.hpp"

namespace fmscant {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3 };

namespace cli_detail {

struct CommonOptions {
  std::optional<std::string> preset;
  std::optional<std::string> config;
  std::vector<std::string> overrides;
  std::string format = "json";
  std::optional<std::string> output;
  std::optional<std::string> save_config;
};

struct ModelOptions {
  std::string convention = "paper";
  std::string thermal = "paper";
  std::string signal = "paper";

  BudgetOptions budget() const {
    BudgetOptions o;
    o.convention = convention == "angular" ? FrequencyConvention::angular : FrequencyConvention::paper;
    o.thermal_mode = thermal == "equipartition" ? ThermalMode::equipartition : ThermalMode::paper;
    o.signal = signal == "chain" ? SignalSource::chain : SignalSource::paper;
    return o;
  }
};

inline void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--preset", o.preset, "built-in scenario (see `presets`)");
  app->add_option("--config", o.config, "flat `section.key = value` scenario file")->check(CLI::ExistingFile);
  app->add_option("--set", o.overrides, "KEY=VALUE override, applied last (repeatable)");
  app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--output", o.output, "write the report here instead of standard output");
  app->add_option("--save-config", o.save_config, "write the resolved scenario as a config file");
}

inline void add_model(CLI::App* app, ModelOptions& m) {
  app->add_option("--convention", m.convention, "frequency convention of the closed forms")
      ->check(CLI::IsMember({"paper", "angular"}));
  app->add_option("--thermal", m.thermal, "thermal amplitude: 4 k_B T/k (paper) or k_B T/k")
      ->check(CLI::IsMember({"paper", "equipartition"}));
  app->add_option("--signal", m.signal, "drive absorbance: alpha_L_peak (paper) or beat-signal equivalent (chain)")
      ->check(CLI::IsMember({"paper", "chain"}));
}

inline void require_scheme(const Scenario& s, Scheme scheme, std::string_view label = "") {
  auto v = validate_scenario(s, scheme);
  if (const auto* bad = std::get_if<std::vector<Violation>>(&v)) {
    std::string msg = "invalid scenario";
    if (!label.empty()) msg += " (" + std::string(label) + ")";
    msg += ":";
    for (const auto& x : *bad) msg += "\n  " + x.message;
    throw config_error(msg);
  }
}

inline RunReport start_report(std::string command, const CommonOptions& o, const Scenario& s) {
  RunReport r;
  r.command = std::move(command);
  r.scenario = s;
  r.preset = o.preset;
  r.config_path = o.config;
  r.overrides = o.overrides;
  return r;
}

inline std::string_view mode_name(AlphaMode m) { return m == AlphaMode::rin_only ? "rin_only" : "full"; }

inline std::vector<AlphaMode> selected_modes(const std::optional<std::string>& mode) {
  if (!mode) return {AlphaMode::rin_only, AlphaMode::full};
  return {*mode == "full" ? AlphaMode::full : AlphaMode::rin_only};
}

// --- subcommands -----------------------------------------------------------

inline RunReport cmd_budget(const CommonOptions& o, const ModelOptions& m, const Scenario& s) {
  require_scheme(s, Scheme::cantilever);
  const auto opt = m.budget();
  const auto b = noise_budget(s, opt);
  const auto d = dominance_analysis(s, opt);
  RunReport r = start_report("budget", o, s);
  r.add("x_sig", b.x_sig_m, "m");
  r.add("x_T", b.x_T_m, "m");
  r.add("x_SN", b.x_SN_m, "m");
  r.add("x_N", b.x_N_m, "m");
  r.add("noise_rms", std::sqrt(b.noise_ms()), "m");
  r.add("snr_cantilever", b.snr(), "1");
  r.add("snr_cantilever_direct", snr_cantilever(s, opt), "1");
  r.add("xi_crossover", d.xi_crossover_rtHz, "Hz^-1/2");
  r.add("xi_crossover_quadrature", d.xi_crossover_quadrature_rtHz, "Hz^-1/2");
  r.add("xi_published_threshold", d.published_threshold_rtHz, "Hz^-1/2");
  r.add("published_to_derived_ratio", d.published_ratio, "1");
  r.notes.push_back("dominant noise source: " + std::string(to_string(d.dominant)));
  r.notes.push_back(d.note);
  return r;
}

inline RunReport cmd_min_alpha(const CommonOptions& o, const ModelOptions& m, const std::optional<std::string>& mode,
                               const Scenario& s) {
  require_scheme(s, Scheme::any);
  RunReport r = start_report("min-alpha", o, s);
  const auto opt = m.budget();
  const bool cantilever_ok = resonant_drive(s);
  for (const auto am : selected_modes(mode)) {
    if (cantilever_ok) {
      r.add("min_alpha_cantilever_" + std::string(mode_name(am)), min_alpha_cantilever(s, am, opt), "1");
    }
    r.add("min_alpha_electronic_" + std::string(mode_name(am)), min_alpha_electronic(s, am), "1");
  }
  if (!cantilever_ok) {
    r.notes.push_back("cantilever scheme skipped: modulation.omega_mod does not drive the cantilever resonance");
  }
  return r;
}

inline RunReport cmd_compare(const CommonOptions& o, const std::optional<std::string>& electronic_preset,
                             const Scenario& cant, const Scenario& elec) {
  require_scheme(cant, Scheme::cantilever, "cantilever side");
  require_scheme(elec, Scheme::any, "electronic side");
  const auto c = compare_schemes(cant, elec);
  RunReport r = start_report("compare", o, cant);
  r.electronic_preset = electronic_preset;
  r.add("min_alpha_cantilever_rin_only", c.cantilever_rin_only, "1");
  r.add("min_alpha_electronic_rin_only", c.electronic_rin_only, "1");
  r.add("ratio_rin_only", c.ratio_rin_only, "1");
  r.add("min_alpha_cantilever_full", c.cantilever_full, "1");
  r.add("min_alpha_electronic_full", c.electronic_full, "1");
  r.add("ratio_full", c.ratio_full, "1");
  return r;
}

inline RunReport cmd_thermal_limit(const CommonOptions& o, const Scenario& s) {
  require_scheme(s, Scheme::any);
  RunReport r = start_report("thermal-limit", o, s);
  const auto& rin = s.laser.rin;
  if (s.cantilever.omega_0 > rin.omega_L) {
    const auto t = thermal_limit_margin(s);
    r.add("mu", t.mu, "1");
    r.add("lhs", t.lhs, "Hz^-1/2");
    r.add("rhs", t.rhs, "Hz^-1/2");
    r.add("satisfied", t.satisfied ? 1.0 : 0.0, "bool");
  } else {
    r.notes.push_back("omega_0 <= omega_L: the condition is only defined above the noise peak");
  }
  const auto b = min_resonant_frequency(s);
  r.add("constrained", b.constrained ? 1.0 : 0.0, "bool");
  if (b.constrained) {
    r.add("mu_min", b.mu, "1");
    r.add("omega_0_min", b.omega_0, "paperHz");
  } else {
    r.notes.push_back("unconstrained: xi_peak/sqrt(2) < rhs, the condition holds for every omega_0 above omega_L");
  }
  return r;
}

inline RunReport cmd_sweep(const CommonOptions& o, const SweepAxis& axis, const std::string& metric,
                           const Scenario& s) {
  require_scheme(s, Scheme::any);
  RunReport r = start_report("sweep", o, s);
  r.table = sweep(s, axis, metric);
  return r;
}

inline RunReport cmd_optimize(const CommonOptions& o, double lo, double hi, bool constrained, const Scenario& s) {
  require_scheme(s, Scheme::cantilever);
  OptimizeOptions opt;
  opt.require_thermal_limit = constrained;
  const auto best = optimize_resonance(s, lo, hi, opt);
  RunReport r = start_report("optimize", o, s);
  r.add("feasible", best.feasible ? 1.0 : 0.0, "bool");
  if (best.feasible) {
    r.add("omega_0", best.omega_0, "paperHz");
    r.add("min_alpha_cantilever_full", best.min_alpha, "1");
  } else {
    r.notes.push_back("infeasible: the thermal-limit condition fails at every scanned omega_0");
  }
  r.add("evaluations", static_cast<double>(best.evaluations), "1");
  return r;
}

struct SimOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 50;
  std::vector<std::string> channels = {"thermal", "rin", "shot"};
  std::string signal = "paper";
  double dt = 0.0;
  double duration = 0.0;
  double burn_in = -1.0;
  double tau = 0.0;
  double max_samples = 5e7;
};

inline RunReport cmd_simulate(const CommonOptions& o, const SimOptions& so, const Scenario& s) {
  require_scheme(s, Scheme::cantilever);
  sim::SimConfig cfg = sim::default_sim_config(s, so.seed);
  cfg.channels = {false, false, false};
  for (const auto& c : so.channels) {
    if (c == "thermal") cfg.channels.thermal = true;
    else if (c == "rin") cfg.channels.rin = true;
    else if (c == "shot") cfg.channels.shot = true;
    else if (c != "none") throw config_error("unknown noise channel '" + c + "' (thermal, rin, shot, none)");
  }
  cfg.signal = so.signal == "chain" ? SignalSource::chain : SignalSource::paper;
  if (so.tau > 0.0) cfg.lockin_tau_s = so.tau;
  if (so.dt > 0.0) cfg.dt_s = so.dt;
  if (so.burn_in >= 0.0) cfg.burn_in_s = so.burn_in;
  cfg.duration_s = so.duration > 0.0
                       ? so.duration
                       : cfg.burn_in_s + 5.0 * sim::effective_lockin_tau(s, cfg) + 40.0 * sim::ring_time(s);
  if (const auto bad = sim::validate_sim_config(s, cfg); !bad.empty()) {
    std::string msg = "invalid simulation settings:";
    for (const auto& v : bad) msg += "\n  " + v.message;
    throw config_error(msg);
  }
  const double samples = cfg.duration_s / cfg.dt_s;
  if (samples > so.max_samples) {
    throw config_error("simulation needs " + format_number(std::round(samples)) +
                       " samples per run, above --max-samples " + format_number(so.max_samples) +
                       "; use a scaled scenario such as --preset scaled-mc");
  }

  const auto x = sim::run_experiment(s, cfg, so.trials);
  RunReport r = start_report("simulate", o, s);
  r.seed = so.seed;
  r.trials = so.trials;
  r.add("dt", cfg.dt_s, "s");
  r.add("duration", cfg.duration_s, "s");
  r.add("burn_in", cfg.burn_in_s, "s");
  r.add("lockin_tau", x.lockin_tau_s, "s");
  r.add("capture_fraction", x.capture_fraction, "1");
  r.add("signal_amplitude", x.signal_amplitude_m.value, "m");
  r.add("signal_amplitude_stderr", x.signal_amplitude_m.std_error, "m");
  r.add("signal_amplitude_analytic", x.analytic_signal_m, "m");
  auto channel = [&r](const std::string& name, const sim::ChannelResult& ch, bool on) {
    if (!on) return;
    r.add("noise_rms_" + name, ch.noise_rms_m.value, "m");
    r.add("noise_rms_" + name + "_stderr", ch.noise_rms_m.std_error, "m");
    r.add("noise_rms_" + name + "_analytic", ch.analytic_rms_m, "m");
  };
  channel("thermal", x.thermal, cfg.channels.thermal);
  channel("shot", x.shot, cfg.channels.shot);
  channel("rin", x.rin, cfg.channels.rin);
  if (cfg.channels.count() > 0) {
    channel("combined", x.combined, true);
    r.add("snr", x.snr.value, "1");
    r.add("snr_stderr", x.snr.std_error, "1");
    r.add("snr_combined", x.snr_combined, "1");
    r.add("snr_analytic", x.analytic_snr, "1");
  }
  if (cfg.channels.thermal) {
    r.add("thermal_variance", x.thermal_variance_m2.value, "m^2");
    r.add("thermal_variance_stderr", x.thermal_variance_m2.std_error, "m^2");
    r.add("equipartition_variance", x.equipartition_variance_m2, "m^2");
  }
  r.notes.push_back("analytic targets use the angular convention with equipartition thermal amplitude");
  return r;
}

inline std::string render_presets(const std::string& format) {
  if (format == "csv") {
    std::string out = "name,description\r\n";
    for (const auto& p : presets()) out += detail::csv_field(p.name) + "," + detail::csv_field(p.description) + "\r\n";
    return out;
  }
  nlohmann::ordered_json j;
  j["command"] = "presets";
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& p : presets()) {
    list.push_back({{"name", p.name}, {"description", p.description}, {"fingerprint", scenario_fingerprint(p.scenario)}});
  }
  j["presets"] = list;
  j["version"] = kToolVersion;
  return j.dump(2) + "\n";
}

inline void emit(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw config_error("cannot write output file '" + *path + "'");
  f << text;
}

inline std::string render(const RunReport& r, const std::string& format) {
  return format == "csv" ? to_csv(r) : to_json(r).dump(2) + "\n";
}

}  // namespace cli_detail

// argv[0] is the program name. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Sensitivity analysis and simulation for FM spectroscopy with cantilever detection", "fmscant"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonOptions common;
  ModelOptions model;
  std::optional<std::string> mode;
  std::optional<std::string> electronic_preset;
  SweepAxis axis;
  std::string metric;
  double opt_lo = 0.0;
  double opt_hi = 0.0;
  bool no_constraint = false;
  SimOptions sim_opts;

  auto* budget = app.add_subcommand("budget", "noise budget, SNR and noise dominance for the cantilever scheme");
  add_common(budget, common);
  add_model(budget, model);

  auto* min_alpha = app.add_subcommand("min-alpha", "minimum detectable absorbance, both schemes");
  add_common(min_alpha, common);
  add_model(min_alpha, model);
  min_alpha->add_option("--mode", mode, "report one mode only")->check(CLI::IsMember({"rin_only", "full"}));

  auto* compare = app.add_subcommand("compare", "cantilever / electronic minimum absorbance ratio");
  add_common(compare, common);
  compare->add_option("--preset-electronic", electronic_preset, "scenario for the electronic side (default: same)");

  auto* thermal = app.add_subcommand("thermal-limit", "thermal-noise-limit condition and minimum resonance");
  add_common(thermal, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a metric along one parameter axis");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--axis", axis.path, "parameter key, e.g. cantilever.quality")->required();
  sweep_cmd->add_option("--min", axis.min, "first axis value")->required();
  sweep_cmd->add_option("--max", axis.max, "last axis value")->required();
  sweep_cmd->add_option("--count", axis.count, "number of grid points (>= 2)")->capture_default_str();
  sweep_cmd->add_flag("--log", axis.log, "logarithmic spacing");
  sweep_cmd->add_option("--metric", metric, "metric name")->required();

  auto* optimize = app.add_subcommand("optimize", "best resonance frequency under the thermal-limit condition");
  add_common(optimize, common);
  optimize->add_option("--min", opt_lo, "lower omega_0 bound (paperHz)")->required();
  optimize->add_option("--max", opt_hi, "upper omega_0 bound (paperHz)")->required();
  optimize->add_flag("--no-constraint", no_constraint, "ignore the thermal-limit condition");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo time-domain experiment");
  add_common(simulate, common);
  simulate->add_option("--seed", sim_opts.seed, "64-bit seed; trial i uses seed + i")->capture_default_str();
  simulate->add_option("--trials", sim_opts.trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--channels", sim_opts.channels, "noise channels: thermal rin shot | none")->delimiter(',');
  simulate->add_option("--signal", sim_opts.signal, "drive model")->check(CLI::IsMember({"paper", "chain"}));
  simulate->add_option("--dt", sim_opts.dt, "time step in s (default: period/64)");
  simulate->add_option("--duration", sim_opts.duration, "run length in s");
  simulate->add_option("--burn-in", sim_opts.burn_in, "discarded ring-up in s (default: 10 ring times)");
  simulate->add_option("--tau", sim_opts.tau, "lock-in time constant in s (default: 10 periods)");
  simulate->add_option("--max-samples", sim_opts.max_samples, "refuse runs longer than this many steps")
      ->capture_default_str();

  auto* list = app.add_subcommand("presets", "list built-in scenarios");
  std::string list_format = "json";
  list->add_option("--format", list_format, "output format")->check(CLI::IsMember({"json", "csv"}));
  std::optional<std::string> list_output;
  list->add_option("--output", list_output, "write here instead of standard output");

  // CLI11 consumes a reversed argument vector without the program name.
  std::vector<std::string> rev;
  for (std::size_t i = argv.size(); i-- > 1;) rev.push_back(argv[i]);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitConfig;
  }

  try {
    if (list->parsed()) {
      emit(render_presets(list_format), list_output, out);
      return kExitOk;
    }
    if (!common.preset && !common.config) {
      common.preset = simulate->parsed() ? "scaled-mc" : "paper-main";
    }
    const Scenario s = load_config({common.preset, common.config, common.overrides});
    if (common.save_config) {
      std::ofstream f(*common.save_config, std::ios::binary);
      if (!f) throw config_error("cannot write config file '" + *common.save_config + "'");
      f << write_config(s);
    }

    RunReport report;
    if (budget->parsed()) {
      report = cmd_budget(common, model, s);
    } else if (min_alpha->parsed()) {
      report = cmd_min_alpha(common, model, mode, s);
    } else if (compare->parsed()) {
      const Scenario e = electronic_preset ? load_config({electronic_preset, std::nullopt, common.overrides}) : s;
      report = cmd_compare(common, electronic_preset, s, e);
    } else if (thermal->parsed()) {
      report = cmd_thermal_limit(common, s);
    } else if (sweep_cmd->parsed()) {
      report = cmd_sweep(common, axis, metric, s);
    } else if (optimize->parsed()) {
      report = cmd_optimize(common, opt_lo, opt_hi, !no_constraint, s);
    } else {
      report = cmd_simulate(common, sim_opts, s);
    }
    emit(render(report, common.format), common.output, out);
    return kExitOk;
  } catch (const numeric_error& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {  // config_error, domain_error
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace fmscant
