#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "magnomech/constants.hpp"
#include "magnomech/error.hpp"
#include "magnomech/records_io.hpp"

namespace magnomech {
namespace {

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') out.push_back(line);
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

SweepResult small_sweep() {
  auto s = make_preset("fig2");
  s.axes[0].count = 6;
  s.axes[1].count = 6;
  return run_steady_sweep(s);
}

TEST(WriteRecords, EmptyResultIsHeaderOnly) {
  SweepResult r;
  r.scenario = make_preset("fig2");
  std::ostringstream out;
  write_records(out, r, OutputFormat::Csv);
  const auto lines = data_lines(out.str());
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0], "delta_c,delta_m_eff,E_om,E_oM,E_mM,R_min,stability_margin,status");
  EXPECT_NE(out.str().find("# delta_c: cavity detuning / 2pi [Hz]"), std::string::npos);
}

TEST(WriteRecords, CsvSchema) {
  const auto r = small_sweep();
  std::ostringstream out;
  write_records(out, r, OutputFormat::Csv);
  const auto lines = data_lines(out.str());
  ASSERT_EQ(lines.size(), r.records.size() + 1);
  int unstable = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i]);
    ASSERT_EQ(f.size(), 8u) << lines[i];
    EXPECT_TRUE(f[7] == "ok" || f[7] == "unstable") << f[7];
    const auto& rec = r.records[i - 1];
    EXPECT_NEAR(std::stod(f[0]), rec.axis_values[0] / constants::two_pi, 1e-3);
    if (f[7] == "unstable") {
      ++unstable;
      EXPECT_TRUE(f[2].empty() && f[3].empty() && f[4].empty() && f[5].empty());
    } else {
      EXPECT_NEAR(std::stod(f[2]), rec.record.e_om, 1e-11 * std::max(1.0, rec.record.e_om));
    }
  }
  EXPECT_EQ(static_cast<std::size_t>(unstable), r.unstable_count());
}

TEST(WriteRecords, TwelveSignificantDigits) {
  SweepResult r;
  r.scenario = make_preset("fig3c");
  PointRecord rec;
  rec.axis_values = {0.1};
  rec.record.e_om = 0.123456789012345;
  rec.record.e_oM = 1.0;
  rec.record.e_mM = 0.0;
  rec.record.r_min = 2.0 / 3.0;
  rec.record.stability_margin = -1234567.891234567;
  r.records.push_back(rec);
  std::ostringstream out;
  write_records(out, r, OutputFormat::Csv);
  EXPECT_EQ(data_lines(out.str()).back(), "0.1,0.123456789012,1,0,0.666666666667,-1234567.89123,ok");
}

TEST(WriteRecords, NdjsonHasSameFields) {
  const auto r = small_sweep();
  std::ostringstream csv, nd;
  write_records(csv, r, OutputFormat::Csv);
  write_records(nd, r, OutputFormat::Ndjson);
  const auto header = split(data_lines(csv.str())[0]);
  const auto rows = data_lines(nd.str());
  ASSERT_EQ(rows.size(), r.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto j = nlohmann::json::parse(rows[i]);
    ASSERT_EQ(j.size(), header.size());
    for (const auto& key : header) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["status"], std::string(to_string(r.records[i].status)));
    if (r.records[i].status != PointStatus::Ok) EXPECT_TRUE(j["E_om"].is_null());
  }
}

TEST(WriteRecords, DynamicsSchema) {
  auto s = make_preset("fig5");
  s.dynamics.t_max = 1e-7;
  s.dynamics.output_step = 1e-8;
  const auto r = run_dynamics(s);
  std::ostringstream out;
  write_dynamics(out, r, OutputFormat::Csv);
  const auto lines = data_lines(out.str());
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines[0], "t,E_om,E_oM,E_mM,R_min,stability_margin,status");
  EXPECT_EQ(split(lines[1])[0], "0");
}

TEST(WriteRecords, UnwritablePathReportsIoError) {
  SweepResult r;
  r.scenario = make_preset("fig2");
  try {
    write_records(std::filesystem::path("/nonexistent-dir/out.csv"), r, OutputFormat::Csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/out.csv"), std::string::npos);
  }
}

}  // namespace
}  // namespace magnomech
