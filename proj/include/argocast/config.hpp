#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "argocast/backtest.hpp"
#include "argocast/csv.hpp"

namespace argocast::config {

struct DataInput {
  std::filesystem::path path;
  SeriesLayout layout = SeriesLayout::WideByRegion;
};

struct SelectionConfig {
  Date window_start = Date::from_ymd(2020, 8, 1);
  Date window_end = Date::from_ymd(2020, 12, 31);
  double threshold = 0.6;
  int k_max = 11;
  int lag_min = 0;
  int lag_max = 21;
  int iqr_window = 7;
  double iqr_k_sd = 3.0;
  int ma_window = 7;
};

// Full run configuration. Every tunable carries its default so a minimal
// config file only names the data paths.
struct RunConfig {
  DataInput hospitalizations;
  DataInput cases;
  DataInput vaccination;
  std::filesystem::path queries_path;
  std::filesystem::path adjacency_path;
  std::optional<std::filesystem::path> external_forecasts;

  SelectionConfig selection;
  backtest::BacktestConfig backtest;
  bool write_daily = true;
  bool dump_fits = false;
  std::filesystem::path output_dir = "out";

  std::filesystem::path config_path;  // where this config was loaded from
};

// Parses the JSON config; relative paths resolve against the config file's
// directory. The ARGOCAST_OUTPUT_DIR environment variable overrides
// output_dir.
RunConfig load_config(const std::filesystem::path& path);

// Every violated invariant as one human-readable line; empty means valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

// Effective-config echo, sufficient to reproduce the run.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace argocast::config
