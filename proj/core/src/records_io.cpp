#include "magnomech/records_io.hpp"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "magnomech/constants.hpp"
#include "magnomech/error.hpp"

namespace magnomech {

namespace {

struct Column {
  std::string name;
  std::string doc;
};

bool is_frequency(SweepParam p) {
  return p == SweepParam::DeltaC || p == SweepParam::DeltaM || p == SweepParam::CouplingGmd;
}

// Axis values leave in the same units the scenario files use.
double user_units(SweepParam p, double v) { return is_frequency(p) ? v / constants::two_pi : v; }

std::string axis_doc(SweepParam p) {
  switch (p) {
    case SweepParam::DeltaC: return "cavity detuning / 2pi [Hz]";
    case SweepParam::DeltaM: return "effective magnon detuning / 2pi [Hz]";
    case SweepParam::CouplingGmd: return "magnomechanical coupling / 2pi [Hz]";
    case SweepParam::Tau: return "beam-splitter reflectivity [1]";
    case SweepParam::Theta: return "feedback phase [rad]";
    case SweepParam::Temperature: return "bath temperature [K]";
  }
  return "";
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

// One output row; empty optionals become "" (CSV) or null (NDJSON).
struct Row {
  std::vector<double> leading;
  std::optional<double> e_om, e_oM, e_mM, r_min;
  double margin = 0.0;
  std::string_view status;
};

Row make_row(std::vector<double> leading, const EntanglementRecord& r, PointStatus status) {
  Row row;
  row.leading = std::move(leading);
  row.margin = r.stability_margin;
  row.status = to_string(status);
  if (status == PointStatus::Ok) {
    row.e_om = r.e_om;
    row.e_oM = r.e_oM;
    row.e_mM = r.e_mM;
    row.r_min = r.r_min;
  }
  return row;
}

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names{"E_om", "E_oM", "E_mM", "R_min", "stability_margin",
                                              "status"};
  return names;
}

void write_header(std::ostream& out, std::string_view kind, const Scenario& s,
                  const std::vector<Column>& leading) {
  out << "# magnomech " << kind << '\n';
  out << "# scenario: " << (s.name.empty() ? "(unnamed)" : s.name) << '\n';
  out << "# version: " << code_version() << '\n';
  for (const auto& c : leading) out << "# " << c.name << ": " << c.doc << '\n';
  out << "# E_om, E_oM, E_mM: logarithmic negativities (cavity|magnon, cavity|mechanics, "
         "magnon|mechanics) [1]\n";
  out << "# R_min: minimum residual contangle [1], empty if monogamy is violated\n";
  out << "# stability_margin: max Re eig of the drift matrix [rad/s]\n";
  bool first = true;
  for (const auto& c : leading) {
    out << (first ? "" : ",") << c.name;
    first = false;
  }
  for (const auto& m : measure_names()) {
    out << (first ? "" : ",") << m;
    first = false;
  }
  out << '\n';
}

void write_csv_row(std::ostream& out, const Row& row) {
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  std::string line;
  for (double v : row.leading) line += num(v) + ",";
  line += fmt::format("{},{},{},{},{},{}\n", opt(row.e_om), opt(row.e_oM), opt(row.e_mM),
                      opt(row.r_min), num(row.margin), row.status);
  out << line;
}

void write_json_row(std::ostream& out, const std::vector<Column>& leading, const Row& row) {
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("null"); };
  std::string line = "{";
  for (std::size_t i = 0; i < leading.size(); ++i) {
    line += fmt::format("\"{}\":{},", leading[i].name, num(row.leading[i]));
  }
  line += fmt::format(
      "\"E_om\":{},\"E_oM\":{},\"E_mM\":{},\"R_min\":{},\"stability_margin\":{},\"status\":\"{}\"}}\n",
      opt(row.e_om), opt(row.e_oM), opt(row.e_mM), opt(row.r_min), num(row.margin), row.status);
  out << line;
}

template <typename Fn>
void with_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot open '{}' for writing", path.string()));
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

void write_records(std::ostream& out, const SweepResult& result, OutputFormat format) {
  std::vector<Column> leading;
  for (const auto& a : result.scenario.axes) {
    leading.push_back({std::string(to_string(a.param)), axis_doc(a.param)});
  }
  if (format == OutputFormat::Csv) write_header(out, "steady sweep", result.scenario, leading);

  for (const auto& rec : result.records) {
    std::vector<double> lead;
    for (std::size_t k = 0; k < rec.axis_values.size(); ++k) {
      lead.push_back(user_units(result.scenario.axes[k].param, rec.axis_values[k]));
    }
    const auto row = make_row(std::move(lead), rec.record, rec.status);
    if (format == OutputFormat::Csv) write_csv_row(out, row);
    else write_json_row(out, leading, row);
  }
}

void write_records(const std::filesystem::path& path, const SweepResult& result,
                   OutputFormat format) {
  with_file(path, [&](std::ostream& out) { write_records(out, result, format); });
}

void write_dynamics(std::ostream& out, const DynamicsResult& result, OutputFormat format) {
  const std::vector<Column> leading{{"t", "time [s]"}};
  if (format == OutputFormat::Csv) write_header(out, "dynamics", result.scenario, leading);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto row = make_row({result.times[i]}, result.records[i], PointStatus::Ok);
    if (format == OutputFormat::Csv) write_csv_row(out, row);
    else write_json_row(out, leading, row);
  }
}

void write_dynamics(const std::filesystem::path& path, const DynamicsResult& result,
                    OutputFormat format) {
  with_file(path, [&](std::ostream& out) { write_dynamics(out, result, format); });
}

}  // namespace magnomech
