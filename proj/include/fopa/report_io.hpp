#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fopa/mc_oracle.hpp"
#include "fopa/metrics.hpp"
#include "fopa/propagate.hpp"
#include "fopa/scenarios.hpp"

namespace fopa::io {

using nlohmann::json;

/// Bumped on any change to an emitted JSON or CSV layout.
inline constexpr std::string_view kSchemaVersion = "1.0";

/// {schema_version, command, timestamp, payload}. The timestamp honours
/// SOURCE_DATE_EPOCH so output can be made reproducible.
json envelope(std::string_view command, json payload);
std::string utc_timestamp();

/// Finite numbers as-is, NaN and infinities as null.
json number(double value);

/// Fixed-point with `decimals` digits; "inf"/"-inf" for infinities and an
/// empty field for NaN.
std::string fixed(double value, int decimals = 4);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

json to_json(const ScenarioConfig& config);
json to_json(const TapReport& report);
json to_json(const SweepTrace& trace);
json to_json(const Table1Report& table);
json measured_table1_json();

std::string tap_report_csv(const TapReport& report);
std::string sweep_trace_csv(const SweepTrace& trace);
std::string table1_csv(const Table1Report& table);
/// Aligned plain-text rendering shaped like the published table.
std::string table1_text(const Table1Report& table, bool ideal);

json measurements_json(const std::vector<MeasurementResult>& results);
/// Header: label,theta,mean,variance,variance_db
std::string measurements_csv(const std::vector<MeasurementResult>& results);

struct OracleRow {
  std::string label;
  QuadratureStats analytic;
  McEstimate mc;
  ComparisonVerdict verdict;
};
json oracle_json(const std::vector<OracleRow>& rows);
std::string oracle_csv(const std::vector<OracleRow>& rows);

}  // namespace fopa::io
