#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "argocast/series.hpp"

namespace argocast::preprocess {

// Per-term day offset minimizing the MSE of a simple regression of the
// target on the shifted query series.
struct LagTable {
  std::map<std::string, int> entries;

  int lag_for(const std::string& term) const;
  void write_csv(const std::filesystem::path& path) const;
  static LagTable read_csv(const std::filesystem::path& path);
};

// Query terms kept by the correlation screen, sorted by descending correlation.
struct TermSelection {
  std::vector<std::string> terms;
  std::vector<double> correlations;

  void write_csv(const std::filesystem::path& path, const LagTable& lags) const;
  static TermSelection read_csv(const std::filesystem::path& path);
};

// Rolling outlier filter: a point deviating from the trailing `window`-day
// mean by more than k_sd trailing standard deviations is replaced by that
// mean. Sequential pass over a working copy, so replacements feed forward
// into later windows; the first `window` points are never altered.
// A zero-variance trailing window flags any deviation beyond an absolute
// epsilon (1e-9).
DailySeries iqr_filter(const DailySeries& s, int window = 7, double k_sd = 3.0);

// Trailing moving average: output[t] = mean(s[t-w+1..t]). The result is
// w-1 days shorter and starts w-1 days later.
DailySeries moving_average(const DailySeries& s, int w = 7);

// Scans lags in [lag_min, lag_max]; for each lag L fits y[t] = a + b*x[t-L]
// by least squares over the calendar overlap restricted to the fit window
// and returns the lag with the lowest in-sample MSE (ties toward smaller L).
// Lags with fewer than 3 overlapping points are skipped.
int optimal_lag(const DailySeries& x, const DailySeries& y, Date fit_start, Date fit_end,
                int lag_min = 0, int lag_max = 21);

struct SelectOptions {
  double threshold = 0.6;
  int k_max = 11;
};

// Pearson-correlation screen of (already filtered+smoothed) query series
// against the target, each query shifted by its own optimal lag. Keeps
// correlations strictly above the threshold, at most k_max, sorted
// descending. Zero-variance queries are skipped with a warning.
TermSelection select_terms(const std::vector<DailySeries>& queries, const DailySeries& y,
                           const LagTable& lags, Date window_start, Date window_end,
                           const SelectOptions& opts = {});

// Pearson correlation between x[t - lag] and y[t] over [window_start, window_end];
// nullopt when either side has (near-)zero variance.
std::optional<double> lagged_correlation(const DailySeries& x, const DailySeries& y, int lag,
                                         Date window_start, Date window_end);

}  // namespace argocast::preprocess
