#include "argocast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "argocast/csv.hpp"
#include "argocast/errors.hpp"

namespace argocast::preprocess {

namespace {

constexpr double kZeroSdEps = 1e-9;

struct MeanSd {
  double mean;
  double sd;  // sample sd, n-1 denominator
};

MeanSd trailing_stats(const std::vector<double>& v, size_t t, int window) {
  double sum = 0.0;
  for (size_t i = t - window; i < t; ++i) sum += v[i];
  const double mean = sum / window;
  double ss = 0.0;
  for (size_t i = t - window; i < t; ++i) ss += (v[i] - mean) * (v[i] - mean);
  return {mean, std::sqrt(ss / (window - 1))};
}

}  // namespace

int LagTable::lag_for(const std::string& term) const {
  auto it = entries.find(term);
  if (it == entries.end()) throw ValidationError("no optimal lag recorded for term '" + term + "'");
  return it->second;
}

void LagTable::write_csv(const std::filesystem::path& path) const {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [term, lag] : entries) rows.push_back({term, std::to_string(lag)});
  argocast::write_csv(path, {"term", "lag"}, rows);
}

LagTable LagTable::read_csv(const std::filesystem::path& path) {
  const CsvTable table = argocast::read_csv(path);
  if (table.header.size() < 2) throw CsvError("lag table needs (term, lag) columns");
  LagTable out;
  for (const auto& row : table.rows) {
    out.entries[row[0]] = std::stoi(row[1]);
  }
  return out;
}

void TermSelection::write_csv(const std::filesystem::path& path, const LagTable& lags) const {
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < terms.size(); ++i) {
    rows.push_back({terms[i], std::to_string(lags.lag_for(terms[i])), format_value(correlations[i])});
  }
  argocast::write_csv(path, {"term", "lag", "correlation"}, rows);
}

TermSelection TermSelection::read_csv(const std::filesystem::path& path) {
  const CsvTable table = argocast::read_csv(path);
  if (table.header.size() < 3) throw CsvError("term selection needs (term, lag, correlation) columns");
  TermSelection out;
  for (const auto& row : table.rows) {
    out.terms.push_back(row[0]);
    out.correlations.push_back(std::stod(row[2]));
  }
  return out;
}

DailySeries iqr_filter(const DailySeries& s, int window, double k_sd) {
  if (window < 2) throw ValidationError("iqr_filter: window must be >= 2");
  if (static_cast<int>(s.values.size()) <= window) {
    throw SeriesTooShortError("iqr_filter: series of length " + std::to_string(s.values.size()) +
                              " too short for window " + std::to_string(window));
  }
  DailySeries out = s;
  auto& v = out.values;
  for (size_t t = static_cast<size_t>(window); t < v.size(); ++t) {
    const auto [mean, sd] = trailing_stats(v, t, window);
    const double deviation = std::abs(v[t] - mean);
    if (deviation > std::max(k_sd * sd, kZeroSdEps)) {
      v[t] = mean;
    }
  }
  return out;
}

DailySeries moving_average(const DailySeries& s, int w) {
  if (w < 1) throw ValidationError("moving_average: window must be >= 1");
  const int n = static_cast<int>(s.values.size());
  if (n < w) {
    throw SeriesTooShortError("moving_average: series of length " + std::to_string(n) +
                              " too short for window " + std::to_string(w));
  }
  DailySeries out;
  out.region = s.region;
  out.variable = s.variable;
  out.start_date = s.start_date + (w - 1);
  out.values.resize(n - w + 1);
  double sum = 0.0;
  for (int i = 0; i < w; ++i) sum += s.values[i];
  out.values[0] = sum / w;
  for (int t = w; t < n; ++t) {
    sum += s.values[t] - s.values[t - w];
    out.values[t - w + 1] = sum / w;
  }
  return out;
}

int optimal_lag(const DailySeries& x, const DailySeries& y, Date fit_start, Date fit_end,
                int lag_min, int lag_max) {
  if (lag_min < 0 || lag_max < lag_min) throw ValidationError("optimal_lag: bad lag range");
  double best_mse = std::numeric_limits<double>::infinity();
  int best_lag = -1;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    // Overlap of y's window with x shifted forward by `lag`.
    Date lo = std::max({fit_start, y.start_date, x.start_date + lag});
    Date hi = std::min({fit_end, y.end_date(), x.end_date() + lag});
    const int n = hi - lo + 1;
    if (n < 3) continue;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (Date d = lo; d <= hi; d += 1) {
      const double xv = x.at(d - lag);
      const double yv = y.at(d);
      sx += xv;
      sy += yv;
      sxx += xv * xv;
      sxy += xv * yv;
      syy += yv * yv;
    }
    const double var_x = sxx - sx * sx / n;
    double sse;
    if (var_x <= 1e-12 * std::max(1.0, sxx)) {
      // Constant regressor: intercept-only fit.
      sse = syy - sy * sy / n;
    } else {
      const double b = (sxy - sx * sy / n) / var_x;
      const double a = (sy - b * sx) / n;
      sse = 0.0;
      for (Date d = lo; d <= hi; d += 1) {
        const double r = y.at(d) - a - b * x.at(d - lag);
        sse += r * r;
      }
    }
    const double mse = sse / n;
    if (mse < best_mse) {
      best_mse = mse;
      best_lag = lag;
    }
  }
  if (best_lag < 0) {
    throw InsufficientHistoryError("optimal_lag: no candidate lag has enough overlap");
  }
  return best_lag;
}

std::optional<double> lagged_correlation(const DailySeries& x, const DailySeries& y, int lag,
                                         Date window_start, Date window_end) {
  Date lo = std::max({window_start, y.start_date, x.start_date + lag});
  Date hi = std::min({window_end, y.end_date(), x.end_date() + lag});
  const int n = hi - lo + 1;
  if (n < 3) throw InsufficientHistoryError("lagged_correlation: overlap shorter than 3 days");

  double sx = 0, sy = 0;
  for (Date d = lo; d <= hi; d += 1) {
    sx += x.at(d - lag);
    sy += y.at(d);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (Date d = lo; d <= hi; d += 1) {
    const double dx = x.at(d - lag) - mx;
    const double dy = y.at(d) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 1e-12 * n * std::max(1.0, mx * mx) || syy <= 1e-12 * n * std::max(1.0, my * my)) {
    return std::nullopt;
  }
  return sxy / std::sqrt(sxx * syy);
}

TermSelection select_terms(const std::vector<DailySeries>& queries, const DailySeries& y,
                           const LagTable& lags, Date window_start, Date window_end,
                           const SelectOptions& opts) {
  struct Scored {
    std::string term;
    double cor;
  };
  std::vector<Scored> scored;
  for (const auto& q : queries) {
    const std::string& term = q.variable.term;
    auto cor = lagged_correlation(q, y, lags.lag_for(term), window_start, window_end);
    if (!cor) {
      std::fprintf(stderr, "[argocast] warning: term '%s' has zero variance, excluded\n",
                   term.c_str());
      continue;
    }
    if (*cor > opts.threshold) scored.push_back({term, *cor});
  }
  if (scored.empty()) {
    throw EmptySelectionError("no query term exceeds the correlation threshold " +
                              format_value(opts.threshold));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.cor > b.cor; });
  if (static_cast<int>(scored.size()) > opts.k_max) scored.resize(opts.k_max);

  TermSelection out;
  for (const auto& s : scored) {
    out.terms.push_back(s.term);
    out.correlations.push_back(s.cor);
  }
  return out;
}

}  // namespace argocast::preprocess
