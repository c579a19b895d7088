#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "argocast/bundle.hpp"
#include "argocast/preprocess.hpp"
#include "argocast/solver.hpp"

namespace argocast::backtest {

enum class Method { ARGO, Naive, AR7 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// Daily predictions for horizons 1..14 from one Monday issue date plus
// their weekly aggregates. Daily values are clipped at 0 before
// aggregation, so week1 = sum(daily[0..6]) and week2 = sum(daily[7..13])
// hold exactly.
struct ForecastRecord {
  RegionId region;
  Date issue_date;
  std::array<double, 14> daily{};
  double week1 = 0.0;
  double week2 = 0.0;
  Method method = Method::ARGO;
};

enum class LambdaPolicy { PerFit, FirstFit };

struct SolverSettings {
  double tol = 1e-7;
  int max_iter = 10000;
  int grid_size = 50;
  double grid_min_ratio = 1e-4;
  solver::CvMode cv_mode = solver::CvMode::Blocked;
  int folds = 10;
  LambdaPolicy lambda_policy = LambdaPolicy::PerFit;
};

struct BacktestConfig {
  Date start;
  Date end;
  int window = 56;
  double omega = 0.8;
  std::vector<RegionId> regions;
  std::vector<Method> methods = {Method::ARGO, Method::Naive, Method::AR7};
  std::uint64_t seed = 0;
  SolverSettings solver;
  int jobs = 1;
};

// Resumable per-issue-date persistence. The checkpoint file is a JSON
// list of completed issue dates plus the config hash it belongs to;
// records are stored one JSON file per date next to it.
class CheckpointStore {
 public:
  CheckpointStore(std::filesystem::path dir, std::string config_hash);

  const std::set<Date>& completed() const { return completed_; }
  std::vector<ForecastRecord> load(Date issue_date) const;
  void save(Date issue_date, const std::vector<ForecastRecord>& records);

 private:
  std::filesystem::path dir_;
  std::string config_hash_;
  std::set<Date> completed_;
};

std::pair<double, double> aggregate_weekly(std::span<const double> daily);

// Repeats the last observed week (issue date inclusive) for both future weeks.
ForecastRecord naive_forecast(const DataBundle& bundle, const RegionId& region, Date issue_date);

// Ordinary least-squares AR(7) on the trailing window, iterated
// recursively for 14 steps; falls back to a 1e-8 ridge jitter when the
// normal equations are singular.
ForecastRecord ar7_forecast(const DataBundle& bundle, const RegionId& region, Date issue_date,
                            int window = 56);

// Rolling weekly retraining over every Monday in [cfg.start, cfg.end]
// (start rounded forward to a Monday, end backward, with a warning).
// Only data dated <= T is read for a forecast issued at T. Results are
// ordered by (issue date, region, method) regardless of worker schedule;
// an issue date is checkpointed only once all its records exist.
std::vector<ForecastRecord> run_backtest(const DataBundle& bundle, const BacktestConfig& cfg,
                                         const preprocess::TermSelection& terms,
                                         const preprocess::LagTable& lags,
                                         CheckpointStore* checkpoint = nullptr);

// One weekly aggregate in the forecast wire format.
struct WeeklyForecast {
  std::string method;
  RegionId region;
  Date issue_date;
  Date week_start;
  int horizon_weeks = 1;
  double value = 0.0;
};

std::vector<WeeklyForecast> to_weekly(const std::vector<ForecastRecord>& records);

// CSV wire format: method, region, issue_date, target_week_start, horizon_weeks, value.
void write_forecast_csv(const std::filesystem::path& path,
                        const std::vector<ForecastRecord>& records);
std::vector<WeeklyForecast> read_forecast_csv(const std::filesystem::path& path);

// Daily resolution: method, region, issue_date, target_date, horizon_days, value.
void write_daily_csv(const std::filesystem::path& path,
                     const std::vector<ForecastRecord>& records);

}  // namespace argocast::backtest
