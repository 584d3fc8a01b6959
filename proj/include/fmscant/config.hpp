#pragma once

// Scenario ingestion (presets, flat key-value files, --set overrides) and the
// RunReport emitted by the command-line tool as JSON or CSV.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "fmscant/analysis.hpp"
#include "fmscant/core.hpp"
#include "fmscant/parameters.hpp"
#include "fmscant/presets.hpp"

namespace fmscant {

inline constexpr std::string_view kToolVersion = "0.1.0";

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

// Angular aliases stand in for the canonical key of the same quantity.
inline std::string canonical_name(std::string_view key) {
  constexpr std::string_view alias = "_rad_per_s";
  if (key.size() > alias.size() && key.substr(key.size() - alias.size()) == alias) {
    return std::string(key.substr(0, key.size() - alias.size())) + "_paperHz";
  }
  return std::string(key);
}

// Applies one `key = value` assignment, recording problems instead of
// throwing so that every error in a file is reported together.
inline void apply_assignment(Scenario& s, std::string_view key, std::string_view value, const std::string& where,
                             std::vector<std::string>& errors, std::map<std::string, std::string>& seen) {
  key = trim(key);
  if (!is_parameter(key)) {
    errors.push_back(where + "unknown key '" + std::string(key) + "'");
    return;
  }
  const auto v = parse_number(value);
  if (!v) {
    errors.push_back(where + "cannot parse value '" + std::string(trim(value)) + "' for " + std::string(key));
    return;
  }
  const std::string canon = canonical_name(key);
  if (const auto it = seen.find(canon); it != seen.end() && it->second != key) {
    errors.push_back(where + std::string(key) + " conflicts with " + it->second);
    return;
  }
  seen[canon] = std::string(key);
  try {
    set_parameter(s, key, *v);
  } catch (const config_error& e) {
    errors.push_back(where + e.what());
  }
}

inline std::string join_errors(std::string_view head, const std::vector<std::string>& errors) {
  std::string msg(head);
  for (const auto& e : errors) msg += "\n  " + e;
  return msg;
}

}  // namespace detail

// Parses config text. Without a base scenario every canonical key must be
// present (angular aliases count); with one, the file only overrides.
inline Scenario parse_config(std::string_view text, const std::optional<Scenario>& base = std::nullopt,
                             std::string_view origin = "config") {
  Scenario s = base.value_or(Scenario{});
  if (!base) s.detector.stage_noise_figures_dB.clear();
  std::vector<std::string> errors;
  std::map<std::string, std::string> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected 'section.key = value'");
      continue;
    }
    detail::apply_assignment(s, line.substr(0, eq), line.substr(eq + 1), where, errors, seen);
  }

  if (!base) {
    for (const auto& key : canonical_keys(Scenario{})) {
      if (key.rfind("detector.nf", 0) == 0) continue;  // stages are optional
      if (!seen.count(key)) errors.push_back(std::string(origin) + ": missing required key " + key);
    }
  }
  if (!errors.empty()) throw config_error(detail::join_errors("configuration errors:", errors));
  return s;
}

struct ConfigSource {
  std::optional<std::string> preset;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;  // "key=value", applied last in order
};

// Preset first, then the file, then --set overrides.
inline Scenario load_config(const ConfigSource& src) {
  std::optional<Scenario> base;
  if (src.preset) {
    base = find_preset(*src.preset);
    if (!base) {
      std::string names;
      for (const auto& p : presets()) names += (names.empty() ? "" : ", ") + std::string(p.name);
      throw config_error("unknown preset '" + *src.preset + "' (available: " + names + ")");
    }
  }
  Scenario s = base.value_or(Scenario{});
  if (src.config_path) {
    std::ifstream in(*src.config_path);
    if (!in) throw config_error("cannot open config file '" + *src.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    s = parse_config(buf.str(), base, *src.config_path);
  } else if (!base) {
    throw config_error("no scenario given: use --preset NAME or --config PATH");
  }

  std::vector<std::string> errors;
  std::map<std::string, std::string> seen;
  for (const auto& o : src.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      errors.push_back("--set " + o + ": expected KEY=VALUE");
      continue;
    }
    detail::apply_assignment(s, std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1),
                             "--set " + o + ": ", errors, seen);
  }
  if (!errors.empty()) throw config_error(detail::join_errors("configuration errors:", errors));
  return s;
}

// Canonical keys with round-trip precision; parse_config(write_config(s))
// reproduces s exactly.
inline std::string write_config(const Scenario& s) {
  std::string out = "# fmscant scenario\n";
  for (const auto& key : canonical_keys(s)) {
    out += key + " = " + format_number(*get_parameter(s, key)) + "  # " + std::string(parameter_unit(key)) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

struct ResultValue {
  std::string name;
  double value = 0.0;
  std::string unit;
};

struct RunReport {
  std::string command;
  Scenario scenario;
  std::vector<ResultValue> results;
  std::vector<std::string> notes;
  std::optional<SweepTable> table;
  // provenance
  std::optional<std::string> preset;
  std::optional<std::string> electronic_preset;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;

  void add(std::string name, double value, std::string unit) {
    if (!std::isfinite(value)) throw numeric_error("result " + name + " is not finite");
    results.push_back({std::move(name), value, std::move(unit)});
  }
  const ResultValue* find(std::string_view name) const {
    for (const auto& r : results) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
};

inline nlohmann::ordered_json to_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["command"] = r.command;
  ordered_json scen = ordered_json::object();
  for (const auto& key : canonical_keys(r.scenario)) scen[key] = *get_parameter(r.scenario, key);
  j["scenario"] = scen;

  ordered_json res = ordered_json::object();
  for (const auto& v : r.results) res[v.name] = {{"value", v.value}, {"unit", v.unit}};
  if (r.table) {
    const auto& t = *r.table;
    res["sweep"] = {{"axis", t.axis_name},
                    {"axis_values", t.axis_values},
                    {"metric", t.metric_name},
                    {"metric_values", t.metric_values},
                    {"scenario_fingerprint", t.scenario_fingerprint}};
  }
  if (!r.notes.empty()) res["notes"] = r.notes;
  j["results"] = res;

  ordered_json prov = ordered_json::object();
  prov["preset"] = r.preset ? ordered_json(*r.preset) : ordered_json(nullptr);
  if (r.electronic_preset) prov["electronic_preset"] = *r.electronic_preset;
  prov["config_path"] = r.config_path ? ordered_json(*r.config_path) : ordered_json(nullptr);
  prov["overrides"] = r.overrides;
  prov["seed"] = r.seed ? ordered_json(*r.seed) : ordered_json(nullptr);
  if (r.trials) prov["trials"] = *r.trials;
  prov["scenario_fingerprint"] = scenario_fingerprint(r.scenario);
  j["provenance"] = prov;
  j["version"] = kToolVersion;
  return j;
}

namespace detail {
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace detail

// Sweeps: `index,<axis>,<metric>`. Everything else: `section,name,value,unit`
// with sections scenario, result, note, provenance in that order.
inline std::string to_csv(const RunReport& r) {
  using detail::csv_field;
  std::string out;
  if (r.table) {
    const auto& t = *r.table;
    out = "index," + csv_field(t.axis_name) + "," + csv_field(t.metric_name) + "\r\n";
    for (std::size_t i = 0; i < t.axis_values.size(); ++i) {
      out += std::to_string(i) + "," + format_number(t.axis_values[i]) + "," + format_number(t.metric_values[i]) + "\r\n";
    }
    return out;
  }
  out = "section,name,value,unit\r\n";
  auto row = [&out](std::string_view sec, std::string_view name, std::string_view value, std::string_view unit) {
    out += csv_field(sec) + "," + csv_field(name) + "," + csv_field(value) + "," + csv_field(unit) + "\r\n";
  };
  for (const auto& key : canonical_keys(r.scenario)) {
    row("scenario", key, format_number(*get_parameter(r.scenario, key)), parameter_unit(key));
  }
  for (const auto& v : r.results) row("result", v.name, format_number(v.value), v.unit);
  for (std::size_t i = 0; i < r.notes.size(); ++i) row("note", std::to_string(i + 1), r.notes[i], "");
  row("provenance", "command", r.command, "");
  if (r.preset) row("provenance", "preset", *r.preset, "");
  if (r.electronic_preset) row("provenance", "electronic_preset", *r.electronic_preset, "");
  if (r.config_path) row("provenance", "config_path", *r.config_path, "");
  for (const auto& o : r.overrides) row("provenance", "override", o, "");
  if (r.seed) row("provenance", "seed", std::to_string(*r.seed), "");
  if (r.trials) row("provenance", "trials", std::to_string(*r.trials), "");
  row("provenance", "version", kToolVersion, "");
  return out;
}

}  // namespace fmscant
