#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "argocast/series.hpp"

namespace argocast {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Shortest decimal representation that round-trips the double exactly.
std::string format_value(double v);

enum class SeriesLayout { LongFormat, WideByRegion };

// Loads one variable for one or more regions.
//   LongFormat:   columns (date, region, value)
//   WideByRegion: columns (date, <region>, <region>, ...)
// Rows are sorted by date; duplicate (date, region) rows and calendar gaps are errors.
std::vector<DailySeries> load_series(const std::filesystem::path& path, VariableKind kind,
                                     SeriesLayout layout);

// Loads national query-term series from a wide file: columns (date, <term>, <term>, ...).
// Every term is attached to region "US".
std::vector<DailySeries> load_query_series(const std::filesystem::path& path);

// Inverse of load_series for the given layout (dates normalized to ISO-8601).
void write_series_csv(const std::filesystem::path& path, const std::vector<DailySeries>& series,
                      SeriesLayout layout);

}  // namespace argocast
