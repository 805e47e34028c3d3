#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "magnomech/sweep.hpp"

namespace magnomech {

enum class OutputFormat { Csv, Ndjson };

/// CSV: `#` header comments (scenario, units), a column header row, then one
/// row per grid point in grid order. Axis columns use the user-facing units
/// (Hz for omega/2pi quantities), then E_om, E_oM, E_mM, R_min,
/// stability_margin (rad/s), status. Values carry 12 significant digits;
/// fields without a value are left empty (CSV) or null (NDJSON).
void write_records(std::ostream& out, const SweepResult& result, OutputFormat format);
void write_records(const std::filesystem::path& path, const SweepResult& result,
                   OutputFormat format);

/// Same schema with a leading time column `t` in seconds.
void write_dynamics(std::ostream& out, const DynamicsResult& result, OutputFormat format);
void write_dynamics(const std::filesystem::path& path, const DynamicsResult& result,
                    OutputFormat format);

}  // namespace magnomech
