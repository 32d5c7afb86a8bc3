#include "zd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>

namespace zd {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw InvalidArgument(std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

unsigned parse_unsigned(std::string_view key, std::string_view text) {
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_flag(std::string_view key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw InvalidArgument(std::string(key) + ": expected on or off, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (item.empty()) throw InvalidArgument(std::string(key) + ": empty list entry");
    out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string exact(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) {
    if (!out.empty()) out += ", ";
    out += exact(x);
  }
  return out;
}

using Setter = std::function<void(Scenario&, std::string_view, std::string_view)>;

Setter real(double SystemParams::*field) {
  return [field](Scenario& s, std::string_view k, std::string_view v) { s.params.*field = parse_double(k, v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"g", real(&SystemParams::g)},
      {"omega_a", real(&SystemParams::omega_a)},
      {"omega_mw", real(&SystemParams::omega_mw)},
      {"omega_b", real(&SystemParams::omega_b)},
      {"delta", real(&SystemParams::delta)},
      {"u_rr_deviation", real(&SystemParams::u_rr_deviation)},
      {"gamma", real(&SystemParams::gamma)},
      {"gamma_r", real(&SystemParams::gamma_r)},
      {"kappa", real(&SystemParams::kappa)},
      {"eta", real(&SystemParams::eta)},
      {"fock_cutoff",
       [](Scenario& s, std::string_view k, std::string_view v) {
         s.params.fock_cutoff = parse_unsigned(k, v);
         if (s.params.fock_cutoff == 0) throw InvalidArgument("fock_cutoff must be >= 1");
       }},
      {"initial", [](Scenario& s, std::string_view, std::string_view v) { s.initial = parse_named_state(v); }},
      {"t_max", [](Scenario& s, std::string_view k, std::string_view v) { s.t_max = parse_double(k, v); }},
      {"sample_dt", [](Scenario& s, std::string_view k, std::string_view v) { s.sample_dt = parse_double(k, v); }},
      {"model", [](Scenario& s, std::string_view, std::string_view v) { s.model = parse_model_kind(v); }},
      {"feedback", [](Scenario& s, std::string_view k, std::string_view v) { s.feedback = parse_flag(k, v); }},
      {"gamma_values",
       [](Scenario& s, std::string_view k, std::string_view v) { s.grid.gamma_values = parse_list(k, v); }},
      {"kappa_values",
       [](Scenario& s, std::string_view k, std::string_view v) { s.grid.kappa_values = parse_list(k, v); }},
      {"deviation_values",
       [](Scenario& s, std::string_view k, std::string_view v) { s.grid.deviation_values = parse_list(k, v); }},
      {"sweep_fock_cutoff",
       [](Scenario& s, std::string_view k, std::string_view v) {
         s.grid.fock_cutoff = parse_unsigned(k, v);
         if (s.grid.fock_cutoff == 0) throw InvalidArgument("sweep_fock_cutoff must be >= 1");
       }},
      {"verify_every",
       [](Scenario& s, std::string_view k, std::string_view v) { s.grid.verify_every = parse_unsigned(k, v); }},
      {"verify_fock_cutoff",
       [](Scenario& s, std::string_view k, std::string_view v) {
         s.grid.verify_fock_cutoff = parse_unsigned(k, v);
         if (s.grid.verify_fock_cutoff == 0) throw InvalidArgument("verify_fock_cutoff must be >= 1");
       }},
  };
  return table;
}

struct Line {
  std::size_t number;
  std::string_view key;
  std::string_view value;
};

}  // namespace

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
  if (key == "scenario") throw InvalidArgument("scenario cannot be changed after defaults are bound");
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw InvalidArgument("unknown key '" + std::string(key) + "'");
  it->second(s, key, trim(value));
}

Scenario parse_config(std::string_view text, std::optional<ScenarioId> scenario_override) {
  std::vector<Line> lines;
  std::optional<ScenarioId> from_file;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    const std::string where = "line " + std::to_string(number);
    if (eq == std::string_view::npos) throw InvalidArgument(where + ": expected 'key = value'");
    const std::string_view key = trim(raw.substr(0, eq));
    const std::string_view value = trim(raw.substr(eq + 1));
    if (key.empty()) throw InvalidArgument(where + ": missing key");
    if (value.empty()) throw InvalidArgument(where + ": missing value for '" + std::string(key) + "'");
    if (key == "scenario") {
      try {
        from_file = parse_scenario_id(value);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(where + ": " + e.what());
      }
      continue;
    }
    if (!setters().contains(key)) throw InvalidArgument(where + ": unknown key '" + std::string(key) + "'");
    lines.push_back({number, key, value});
  }

  const std::optional<ScenarioId> id = scenario_override ? scenario_override : from_file;
  if (!id) throw InvalidArgument("missing required key 'scenario'");
  Scenario s = default_scenario(*id);
  for (const auto& line : lines) {
    try {
      apply_setting(s, line.key, line.value);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("line " + std::to_string(line.number) + ": " + e.what());
    }
  }
  s.validate();
  return s;
}

std::vector<std::pair<std::string, std::string>> config_entries(const Scenario& s) {
  const SystemParams& p = s.params;
  return {
      {"scenario", std::string(to_string(s.id))},
      {"g", exact(p.g)},
      {"omega_a", exact(p.omega_a)},
      {"omega_mw", exact(p.omega_mw)},
      {"omega_b", exact(p.omega_b)},
      {"delta", exact(p.delta)},
      {"u_rr_deviation", exact(p.u_rr_deviation)},
      {"gamma", exact(p.gamma)},
      {"gamma_r", exact(p.gamma_r)},
      {"kappa", exact(p.kappa)},
      {"eta", exact(p.eta)},
      {"fock_cutoff", std::to_string(p.fock_cutoff)},
      {"initial", std::string(to_string(s.initial))},
      {"t_max", exact(s.t_max)},
      {"sample_dt", exact(s.sample_dt)},
      {"model", std::string(to_string(s.model))},
      {"feedback", s.feedback ? "on" : "off"},
      {"gamma_values", exact(s.grid.gamma_values)},
      {"kappa_values", exact(s.grid.kappa_values)},
      {"deviation_values", exact(s.grid.deviation_values)},
      {"sweep_fock_cutoff", std::to_string(s.grid.fock_cutoff)},
      {"verify_every", std::to_string(s.grid.verify_every)},
      {"verify_fock_cutoff", std::to_string(s.grid.verify_fock_cutoff)},
  };
}

std::string format_config(const Scenario& s) {
  std::string out;
  for (const auto& [k, v] : config_entries(s)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace zd
