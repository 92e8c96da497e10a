#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsa/series.hpp"

namespace tsa {

/// How to pull an annual series out of a long/tidy CSV file (one row per
/// entity-year). Column references are header names, or zero-based indices
/// when the string is all digits and does not match a header.
struct IngestSpec {
    std::string path;
    std::string entity_column = "Entity";
    std::string year_column = "Year";
    std::string value_column = "Value";
    std::optional<std::string> entity_filter;
    std::optional<std::pair<int, int>> year_range;  // inclusive
};

/// Reads, filters, and validates the series: rows are filtered by entity and
/// year range, sorted by year, and must form a gapless run of consecutive
/// years. Throws SchemaError for missing columns, ParseError for
/// unparsable cells (with the line number), GapError for missing or
/// duplicated years, and IoError when the file cannot be read.
TimeSeries ingest_csv(const IngestSpec& spec);

/// Parses one CSV record with RFC 4180 quoting rules.
std::vector<std::string> split_csv_record(const std::string& line);

}  // namespace tsa
