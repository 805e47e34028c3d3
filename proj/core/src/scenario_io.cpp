#include "magnomech/scenario_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "magnomech/constants.hpp"
#include "magnomech/error.hpp"

namespace magnomech {

namespace {

enum class Kind { Frequency, Temperature, Dimensionless, Angle, Tesla, Length, Time };

struct ParamKey {
  std::string_view key;
  Kind kind;
  double SystemParams::*field;
};

constexpr std::array<ParamKey, 18> param_keys{{
    {"omega_c", Kind::Frequency, &SystemParams::omega_c},
    {"omega_m", Kind::Frequency, &SystemParams::omega_m},
    {"omega_d", Kind::Frequency, &SystemParams::omega_d},
    {"delta_c", Kind::Frequency, &SystemParams::delta_c},
    {"delta_m_eff", Kind::Frequency, &SystemParams::delta_m_eff},
    {"kappa_c", Kind::Frequency, &SystemParams::kappa_c},
    {"kappa_m", Kind::Frequency, &SystemParams::kappa_m},
    {"gamma_d", Kind::Frequency, &SystemParams::gamma_d},
    {"g_mc", Kind::Frequency, &SystemParams::g_mc},
    {"G_md", Kind::Frequency, &SystemParams::G_md},
    {"g_md_bare", Kind::Frequency, &SystemParams::g_md_bare},
    {"drive_field", Kind::Tesla, &SystemParams::drive_field},
    {"sphere_diameter", Kind::Length, &SystemParams::sphere_diameter},
    {"tau", Kind::Dimensionless, &SystemParams::tau},
    {"theta", Kind::Angle, &SystemParams::theta},
    {"phi", Kind::Angle, &SystemParams::phi},
    {"omega_drive_amp", Kind::Frequency, &SystemParams::omega_drive_amp},
    {"temperature", Kind::Temperature, &SystemParams::temperature},
}};

const ParamKey* find_param(std::string_view key) {
  for (const auto& k : param_keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

Kind axis_kind(SweepParam p) {
  switch (p) {
    case SweepParam::DeltaC:
    case SweepParam::DeltaM:
    case SweepParam::CouplingGmd:
      return Kind::Frequency;
    case SweepParam::Tau: return Kind::Dimensionless;
    case SweepParam::Theta: return Kind::Angle;
    case SweepParam::Temperature: return Kind::Temperature;
  }
  return Kind::Dimensionless;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Quantity {
  double value;
  std::string_view unit;
};

Quantity split_quantity(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr == text.data()) {
    throw Error(ErrorCode::ParseError, fmt::format("expected a number, got '{}'", text));
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::RangeError, fmt::format("value '{}' is not finite", text));
  }
  return {v, trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)))};
}

[[noreturn]] void unit_error(std::string_view unit, std::string_view expected) {
  throw Error(ErrorCode::UnitError,
              fmt::format("unit '{}' not accepted here (expected {})", unit, expected));
}

double parse_kind(std::string_view text, Kind kind) {
  const auto q = split_quantity(text);
  const auto u = q.unit;
  switch (kind) {
    case Kind::Frequency:
      if (u == "Hz") return constants::angular(q.value);
      if (u == "kHz") return constants::angular(q.value * 1e3);
      if (u == "MHz") return constants::angular(q.value * 1e6);
      if (u == "GHz") return constants::angular(q.value * 1e9);
      if (u == "rad/s") return q.value;
      unit_error(u, "Hz, kHz, MHz, GHz or rad/s");
    case Kind::Temperature:
      if (u == "K" || u.empty()) return q.value;
      if (u == "mK") return q.value / 1e3;
      unit_error(u, "K or mK");
    case Kind::Time:
      if (u == "s" || u.empty()) return q.value;
      if (u == "ms") return q.value / 1e3;
      if (u == "us") return q.value / 1e6;
      if (u == "ns") return q.value / 1e9;
      unit_error(u, "s, ms, us or ns");
    case Kind::Length:
      if (u == "m" || u.empty()) return q.value;
      if (u == "mm") return q.value / 1e3;
      if (u == "um") return q.value / 1e6;
      unit_error(u, "m, mm or um");
    case Kind::Tesla:
      if (u == "T" || u.empty()) return q.value;
      if (u == "nT") return q.value / 1e9;
      unit_error(u, "T or nT");
    case Kind::Angle:
      if (u == "rad" || u.empty()) return q.value;
      unit_error(u, "rad");
    case Kind::Dimensionless:
      if (u.empty()) return q.value;
      unit_error(u, "no unit");
  }
  return q.value;
}

// Shortest Hz literal that maps back to exactly `rad_per_s`.
std::string format_frequency(double rad_per_s) {
  if (rad_per_s == 0.0) return "0 Hz";
  double hz = rad_per_s / constants::two_pi;
  for (int k = 0; k < 8; ++k) {
    for (double cand : {hz, std::nextafter(hz, -INFINITY), std::nextafter(hz, INFINITY)}) {
      if (constants::angular(cand) == rad_per_s) return fmt::format("{} Hz", cand);
    }
    hz = k % 2 == 0 ? std::nextafter(std::nextafter(hz, INFINITY), INFINITY)
                    : std::nextafter(std::nextafter(hz, -INFINITY), -INFINITY);
  }
  return fmt::format("{} rad/s", rad_per_s);
}

std::string format_kind(double v, Kind kind) {
  switch (kind) {
    case Kind::Frequency: return format_frequency(v);
    case Kind::Temperature: return fmt::format("{} K", v);
    case Kind::Time: return fmt::format("{} s", v);
    case Kind::Length: return fmt::format("{} m", v);
    case Kind::Tesla: return fmt::format("{} T", v);
    case Kind::Angle: return fmt::format("{} rad", v);
    case Kind::Dimensionless: return fmt::format("{}", v);
  }
  return fmt::format("{}", v);
}

int parse_count(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, fmt::format("expected an integer count, got '{}'", text));
  }
  return v;
}

bool set_param(SystemParams& p, std::string_view key, std::string_view value) {
  if (key == "coupling_mode") {
    const auto v = trim(value);
    if (v == "direct") p.coupling_mode = CouplingMode::Direct;
    else if (v == "physical") p.coupling_mode = CouplingMode::Physical;
    else throw Error(ErrorCode::ParseError, fmt::format("coupling_mode must be direct or physical, got '{}'", v));
    return true;
  }
  if (const auto* k = find_param(key)) {
    p.*(k->field) = parse_kind(value, k->kind);
    return true;
  }
  return false;
}

bool set_dynamics(DynamicsSettings& d, std::string_view key, std::string_view value) {
  if (key == "t_max") d.t_max = parse_kind(value, Kind::Time);
  else if (key == "output_step") d.output_step = parse_kind(value, Kind::Time);
  else if (key == "step") {
    const auto v = trim(value);
    if (v.empty() || v == "auto") d.step.reset();
    else d.step = parse_kind(v, Kind::Time);
  } else if (key == "gamma0") {
    const auto v = trim(value);
    if (v == "unit") d.gamma0 = InitialState::UnitDiagonal;
    else if (v == "vacuum") d.gamma0 = InitialState::Vacuum;
    else throw Error(ErrorCode::ParseError, fmt::format("gamma0 must be unit or vacuum, got '{}'", v));
  } else {
    return false;
  }
  return true;
}

bool set_scenario(Scenario& s, std::string_view key, std::string_view value) {
  if (key == "name") {
    s.name = std::string(trim(value));
  } else if (key == "mode") {
    const auto v = trim(value);
    if (v == "steady") s.mode = RunMode::Steady;
    else if (v == "dynamics") s.mode = RunMode::Dynamics;
    else throw Error(ErrorCode::ParseError, fmt::format("mode must be steady or dynamics, got '{}'", v));
  } else {
    return false;
  }
  return true;
}

struct PendingAxis {
  std::optional<SweepParam> param;
  std::string min, max;
  std::optional<int> count;
  int line = 0;
};

Axis finish_axis(const PendingAxis& a, std::string_view origin) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::ParseError, fmt::format("{}:{}: [axis] {}", origin, a.line, msg));
  };
  if (!a.param) fail("missing 'param'");
  if (a.min.empty() || a.max.empty()) fail("missing 'min' or 'max'");
  if (!a.count) fail("missing 'count'");
  const Kind kind = axis_kind(*a.param);
  try {
    return Axis{*a.param, parse_kind(a.min, kind), parse_kind(a.max, kind), *a.count};
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}:{}: [axis] {}", origin, a.line, e.what()));
  }
}

}  // namespace

double parse_frequency(std::string_view text) { return parse_kind(text, Kind::Frequency); }

Scenario parse_scenario_text(std::string_view text, std::string_view origin) {
  Scenario s;
  s.base = baseline_params();

  std::string section;
  std::optional<PendingAxis> axis;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;

  auto flush_axis = [&] {
    if (axis) s.axes.push_back(finish_axis(*axis, origin));
    axis.reset();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto fail = [&](ErrorCode code, std::string_view msg) -> void {
      throw Error(code, fmt::format("{}:{}: {}", origin, line_no, msg));
    };

    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::ParseError, "unterminated section header");
      flush_axis();
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section == "axis") {
        axis = PendingAxis{};
        axis->line = line_no;
      } else if (section != "scenario" && section != "params" && section != "dynamics") {
        fail(ErrorCode::ParseError, fmt::format("unknown section [{}]", section));
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::ParseError, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrorCode::ParseError, "empty key");
    if (section.empty()) fail(ErrorCode::ParseError, "key outside of any section");

    try {
      bool known = false;
      if (section == "scenario") {
        known = set_scenario(s, key, value);
      } else if (section == "params") {
        known = set_param(s.base, key, value);
      } else if (section == "dynamics") {
        known = set_dynamics(s.dynamics, key, value);
      } else if (section == "axis") {
        known = true;
        if (key == "param") {
          axis->param = sweep_param_from_string(value);
          if (!axis->param) fail(ErrorCode::ParseError, fmt::format("'{}' cannot be swept", value));
        } else if (key == "min") {
          axis->min = std::string(value);
        } else if (key == "max") {
          axis->max = std::string(value);
        } else if (key == "count") {
          axis->count = parse_count(value);
        } else {
          known = false;
        }
      }
      if (!known) fail(ErrorCode::ParseError, fmt::format("unknown key '{}' in [{}]", key, section));
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.rfind(std::string(origin) + ":", 0) == 0) throw;
      throw Error(e.code(), fmt::format("{}:{}: {}: {}", origin, line_no, key, what));
    }
  }
  flush_axis();

  try {
    validate(s);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", origin, e.what()));
  }
  return s;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, fmt::format("cannot open scenario file '{}'", path.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

Scenario load_preset(std::string_view name) { return make_preset(name); }

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  out += "# magnomech scenario\n";
  out += "[scenario]\n";
  out += fmt::format("name = {}\n", s.name);
  out += fmt::format("mode = {}\n", s.mode == RunMode::Steady ? "steady" : "dynamics");

  out += "\n[params]\n";
  out += fmt::format("coupling_mode = {}\n",
                     s.base.coupling_mode == CouplingMode::Direct ? "direct" : "physical");
  for (const auto& k : param_keys) {
    out += fmt::format("{} = {}\n", k.key, format_kind(s.base.*(k.field), k.kind));
  }

  for (const auto& a : s.axes) {
    const Kind kind = axis_kind(a.param);
    out += "\n[axis]\n";
    out += fmt::format("param = {}\n", to_string(a.param));
    out += fmt::format("min = {}\n", format_kind(a.min, kind));
    out += fmt::format("max = {}\n", format_kind(a.max, kind));
    out += fmt::format("count = {}\n", a.count);
  }

  out += "\n[dynamics]\n";
  out += fmt::format("t_max = {}\n", format_kind(s.dynamics.t_max, Kind::Time));
  out += fmt::format("output_step = {}\n", format_kind(s.dynamics.output_step, Kind::Time));
  out += fmt::format("step = {}\n",
                     s.dynamics.step ? format_kind(*s.dynamics.step, Kind::Time) : std::string("auto"));
  out += fmt::format("gamma0 = {}\n",
                     s.dynamics.gamma0 == InitialState::UnitDiagonal ? "unit" : "vacuum");
  return out;
}

void apply_override(Scenario& target, std::string_view assignment) {
  Scenario s = target;
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::ParseError,
                fmt::format("override '{}' is not of the form key=value", assignment));
  }
  auto key = trim(assignment.substr(0, eq));
  const auto value = trim(assignment.substr(eq + 1));

  std::string_view section;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }

  try {
    bool known = false;
    if (section.empty() || section == "params") {
      known = set_param(s.base, key, value);
      if (known) {
        if (const auto p = sweep_param_from_string(key)) {
          std::erase_if(s.axes, [&](const Axis& a) { return a.param == *p; });
        }
      }
    }
    if (!known && (section.empty() || section == "dynamics")) known = set_dynamics(s.dynamics, key, value);
    if (!known && (section.empty() || section == "scenario")) known = set_scenario(s, key, value);
    if (!known) {
      throw Error(ErrorCode::ParseError, fmt::format("unknown key '{}'", assignment.substr(0, eq)));
    }
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("--set {}: {}", assignment, e.what()));
  }
  validate(s);
  target = std::move(s);
}

}  // namespace magnomech
