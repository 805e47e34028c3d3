#pragma once

// Plain-text scenario files: `[section]` headers followed by `key = value`
// lines, `#` comments. Frequencies are written as omega/2pi with a unit
// (Hz, kHz, MHz, GHz); `rad/s` is also accepted. Keys omitted from
// [params] keep the baseline values.
//
//   [scenario]   name, mode (steady | dynamics)
//   [params]     SystemParams fields by name
//   [axis]       param, min, max, count   (repeat the section for a 2nd axis)
//   [dynamics]   t_max, output_step, step, gamma0 (unit | vacuum)

#include <filesystem>
#include <string>
#include <string_view>

#include "magnomech/sweep.hpp"

namespace magnomech {

/// Parses scenario text; `origin` prefixes diagnostics ("file:line: ...").
Scenario parse_scenario_text(std::string_view text, std::string_view origin = "<scenario>");
Scenario parse_scenario_file(const std::filesystem::path& path);

/// Resolves a preset name via make_preset, reporting UnknownPreset otherwise.
Scenario load_preset(std::string_view name);

std::string serialize_scenario(const Scenario& s);

/// Applies one `key=value` override. Keys are [params] or [dynamics] names,
/// optionally prefixed by the section ("dynamics.t_max"). Setting a parameter
/// that is currently swept pins it and removes that axis.
void apply_override(Scenario& s, std::string_view assignment);

/// Parses "value unit" for a frequency key; returns rad/s.
double parse_frequency(std::string_view text);

}  // namespace magnomech
