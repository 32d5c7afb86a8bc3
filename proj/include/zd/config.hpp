#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zd/scenarios.hpp"

namespace zd {

/// Parses line-oriented `key = value` text into a fully bound scenario.
///
/// Blank lines and `#` comments are ignored. The scenario id comes from
/// `scenario_override` when given, else from the `scenario` key. Defaults of
/// that scenario are then overridden key by key. Keys are the SystemParams
/// field names plus scenario, initial, t_max, sample_dt, model, feedback,
/// gamma_values, kappa_values, deviation_values (comma separated),
/// sweep_fock_cutoff, verify_every and verify_fock_cutoff.
///
/// Throws InvalidArgument for malformed lines (naming the line number),
/// unknown keys, bad values, a missing scenario and invariant violations.
Scenario parse_config(std::string_view text, std::optional<ScenarioId> scenario_override = std::nullopt);

/// Sets one key on s. Throws InvalidArgument for unknown keys and bad values.
/// Does not re-validate the whole scenario.
void apply_setting(Scenario& s, std::string_view key, std::string_view value);

/// The resolved binding as ordered (key, value) pairs. Doubles are printed
/// with 17 significant digits, so parse_config(format_config(s)) == s.
std::vector<std::pair<std::string, std::string>> config_entries(const Scenario& s);
std::string format_config(const Scenario& s);

}  // namespace zd
