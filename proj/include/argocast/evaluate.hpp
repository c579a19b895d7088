#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argocast/backtest.hpp"

namespace argocast::evaluate {

double rmse(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);
// Sample Pearson correlation; throws ValidationError("zero variance") on a
// constant argument.
double pearson(std::span<const double> pred, std::span<const double> truth);

// Region label "STATE_AVG" marks the cross-state average row.
inline constexpr const char* kStateAverageLabel = "STATE_AVG";

struct MetricRow {
  std::string method;
  std::string region;
  double rmse_w1 = 0, rmse_w2 = 0;
  double mae_w1 = 0, mae_w2 = 0;
  // Undefined (zero-variance) correlations are stored as NaN and excluded
  // from averages with a warning.
  double cor_w1 = 0, cor_w2 = 0;
};

// Weekly truth bins: (region, week start date) -> 7-day hospitalization sum.
struct WeeklyTruth {
  std::map<std::pair<std::string, Date>, double> values;

  static WeeklyTruth from_daily(const std::vector<DailySeries>& hosp,
                                const std::vector<backtest::WeeklyForecast>& needed);
  std::optional<double> at(const std::string& region, Date week_start) const;
};

// Per (method, region) error metrics over weekly aggregates, plus one
// cross-state average row per method when at least one state is present
// (unweighted mean over states, the national row excluded).
std::vector<MetricRow> score(const std::vector<backtest::WeeklyForecast>& forecasts,
                             const WeeklyTruth& truth);

struct ReportOptions {
  std::filesystem::path out_dir;
};

// Emits metrics.csv (method, region, horizon_weeks, rmse, mae, cor),
// report.md with one table per region (methods sorted by the mean of
// 1- and 2-week RMSE, best value per column flagged), and one SVG chart
// of truth vs forecasts per region.
void render_report(const std::vector<MetricRow>& rows,
                   const std::vector<backtest::WeeklyForecast>& forecasts, const WeeklyTruth& truth,
                   const ReportOptions& opts);

}  // namespace argocast::evaluate
