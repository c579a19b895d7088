#include "argocast/evaluate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "argocast/csv.hpp"
#include "argocast/errors.hpp"
#include "argocast/svg_chart.hpp"
#include "argocast/util.hpp"

namespace argocast::evaluate {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw ShapeError("prediction and truth lengths differ: " + std::to_string(pred.size()) +
                     " vs " + std::to_string(truth.size()));
  }
  if (pred.empty()) throw ValidationError("empty metric input");
  for (double v : pred) {
    if (!std::isfinite(v)) throw ValidationError("non-finite prediction");
  }
  for (double v : truth) {
    if (!std::isfinite(v)) throw ValidationError("non-finite truth");
  }
}

std::string fmt3(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return std::string(buf);
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double ss = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double s = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
  return s / static_cast<double>(pred.size());
}

double pearson(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  const size_t n = pred.size();
  if (n < 2) throw ValidationError("pearson needs at least 2 points");
  double mp = 0.0, mt = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mp += pred[i];
    mt += truth[i];
  }
  mp /= static_cast<double>(n);
  mt /= static_cast<double>(n);
  double spp = 0.0, stt = 0.0, spt = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dp = pred[i] - mp;
    const double dt = truth[i] - mt;
    spp += dp * dp;
    stt += dt * dt;
    spt += dp * dt;
  }
  const double scale = static_cast<double>(n);
  if (spp <= 1e-24 * scale * std::max(1.0, mp * mp) ||
      stt <= 1e-24 * scale * std::max(1.0, mt * mt)) {
    throw ValidationError("zero variance in pearson input");
  }
  return spt / std::sqrt(spp * stt);
}

WeeklyTruth WeeklyTruth::from_daily(const std::vector<DailySeries>& hosp,
                                    const std::vector<backtest::WeeklyForecast>& needed) {
  std::map<std::string, const DailySeries*> by_region;
  for (const auto& s : hosp) by_region[s.region.code()] = &s;

  WeeklyTruth out;
  for (const auto& f : needed) {
    const auto key = std::make_pair(f.region.code(), f.week_start);
    if (out.values.count(key)) continue;
    auto it = by_region.find(f.region.code());
    if (it == by_region.end()) continue;
    const DailySeries& s = *it->second;
    if (!s.covers(f.week_start, f.week_start + 6)) continue;
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) sum += s.at(f.week_start + i);
    out.values.emplace(key, sum);
  }
  return out;
}

std::optional<double> WeeklyTruth::at(const std::string& region, Date week_start) const {
  auto it = values.find({region, week_start});
  if (it == values.end()) return std::nullopt;
  return it->second;
}

std::vector<MetricRow> score(const std::vector<backtest::WeeklyForecast>& forecasts,
                             const WeeklyTruth& truth) {
  if (forecasts.empty()) throw ValidationError("no forecasts to score");

  struct Key {
    std::string method;
    std::string region;
    auto operator<=>(const Key&) const = default;
  };
  struct Obs {
    Date issue;
    double pred;
    double truth;
  };
  std::map<Key, std::array<std::vector<Obs>, 2>> grouped;

  std::vector<std::string> missing;
  for (const auto& f : forecasts) {
    if (f.horizon_weeks < 1 || f.horizon_weeks > 2) {
      throw ValidationError("horizon_weeks must be 1 or 2");
    }
    const auto t = truth.at(f.region.code(), f.week_start);
    if (!t) {
      missing.push_back(f.region.code() + " week " + f.week_start.to_iso());
      continue;
    }
    grouped[{f.method, f.region.code()}][static_cast<size_t>(f.horizon_weeks - 1)].push_back(
        {f.issue_date, f.value, *t});
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::string joined;
    for (const auto& m : missing) joined += (joined.empty() ? "" : ", ") + m;
    throw ValidationError("truth is missing forecasted weeks: " + joined);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<MetricRow> rows;
  for (auto& [key, by_horizon] : grouped) {
    MetricRow row;
    row.method = key.method;
    row.region = key.region;
    for (int h = 0; h < 2; ++h) {
      auto& obs = by_horizon[static_cast<size_t>(h)];
      if (obs.empty()) {
        throw ValidationError("method " + key.method + " has no " + std::to_string(h + 1) +
                              "-week forecasts for " + key.region);
      }
      std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.issue < b.issue; });
      std::vector<double> p, t;
      for (const auto& o : obs) {
        p.push_back(o.pred);
        t.push_back(o.truth);
      }
      double cor = nan;
      try {
        cor = pearson(p, t);
      } catch (const ValidationError&) {
        log_warn("pearson undefined for " + key.method + "/" + key.region + " week " +
                 std::to_string(h + 1) + " (zero variance); excluded from averages");
      }
      if (h == 0) {
        row.rmse_w1 = rmse(p, t);
        row.mae_w1 = mae(p, t);
        row.cor_w1 = cor;
      } else {
        row.rmse_w2 = rmse(p, t);
        row.mae_w2 = mae(p, t);
        row.cor_w2 = cor;
      }
    }
    rows.push_back(std::move(row));
  }

  // Cross-state averages (national row excluded), one per method.
  std::set<std::string> methods;
  for (const auto& r : rows) methods.insert(r.method);
  for (const auto& method : methods) {
    std::vector<const MetricRow*> states;
    for (const auto& r : rows) {
      if (r.method == method && r.region != "US") states.push_back(&r);
    }
    if (states.empty()) continue;
    MetricRow avg;
    avg.method = method;
    avg.region = kStateAverageLabel;
    auto mean_of = [&](auto getter, bool skip_nan) {
      double sum = 0.0;
      int n = 0;
      for (const auto* r : states) {
        const double v = getter(*r);
        if (skip_nan && std::isnan(v)) continue;
        sum += v;
        ++n;
      }
      return n ? sum / n : nan;
    };
    avg.rmse_w1 = mean_of([](const MetricRow& r) { return r.rmse_w1; }, false);
    avg.rmse_w2 = mean_of([](const MetricRow& r) { return r.rmse_w2; }, false);
    avg.mae_w1 = mean_of([](const MetricRow& r) { return r.mae_w1; }, false);
    avg.mae_w2 = mean_of([](const MetricRow& r) { return r.mae_w2; }, false);
    avg.cor_w1 = mean_of([](const MetricRow& r) { return r.cor_w1; }, true);
    avg.cor_w2 = mean_of([](const MetricRow& r) { return r.cor_w2; }, true);
    rows.push_back(std::move(avg));
  }

  std::sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
    if (a.region != b.region) return a.region < b.region;
    return a.method < b.method;
  });
  return rows;
}

void render_report(const std::vector<MetricRow>& rows,
                   const std::vector<backtest::WeeklyForecast>& forecasts, const WeeklyTruth& truth,
                   const ReportOptions& opts) {
  if (rows.empty()) throw ValidationError("no metric rows to render");
  std::filesystem::create_directories(opts.out_dir);

  // metrics.csv, long format.
  {
    std::vector<std::vector<std::string>> csv_rows;
    for (const auto& r : rows) {
      csv_rows.push_back({r.method, r.region, "1", format_value(r.rmse_w1), format_value(r.mae_w1),
                          std::isnan(r.cor_w1) ? "" : format_value(r.cor_w1)});
      csv_rows.push_back({r.method, r.region, "2", format_value(r.rmse_w2), format_value(r.mae_w2),
                          std::isnan(r.cor_w2) ? "" : format_value(r.cor_w2)});
    }
    write_csv(opts.out_dir / "metrics.csv", {"method", "region", "horizon_weeks", "rmse", "mae", "cor"},
              csv_rows);
  }

  // Region ordering: US first, then states, then the cross-state average.
  std::vector<std::string> regions;
  for (const auto& r : rows) {
    if (std::find(regions.begin(), regions.end(), r.region) == regions.end()) {
      regions.push_back(r.region);
    }
  }
  std::sort(regions.begin(), regions.end(), [](const std::string& a, const std::string& b) {
    auto rank = [](const std::string& s) {
      if (s == "US") return 0;
      if (s == kStateAverageLabel) return 2;
      return 1;
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    return a < b;
  });

  std::ofstream md(opts.out_dir / "report.md");
  if (!md) throw IoError("cannot write report.md");
  md << "# Forecast comparison\n";
  for (const auto& region : regions) {
    std::vector<MetricRow> table;
    for (const auto& r : rows) {
      if (r.region == region) table.push_back(r);
    }
    // Methods sorted by the mean of 1- and 2-week RMSE.
    std::sort(table.begin(), table.end(), [](const MetricRow& a, const MetricRow& b) {
      const double ma = (a.rmse_w1 + a.rmse_w2) / 2.0;
      const double mb = (b.rmse_w1 + b.rmse_w2) / 2.0;
      if (ma != mb) return ma < mb;
      return a.method < b.method;
    });

    std::array<double, 6> best{};
    auto cols = [](const MetricRow& r) {
      return std::array<double, 6>{r.rmse_w1, r.rmse_w2, r.mae_w1, r.mae_w2, r.cor_w1, r.cor_w2};
    };
    for (int c = 0; c < 6; ++c) {
      const bool is_cor = c >= 4;
      double bestv = is_cor ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
      for (const auto& r : table) {
        const double v = cols(r)[static_cast<size_t>(c)];
        if (std::isnan(v)) continue;
        bestv = is_cor ? std::max(bestv, v) : std::min(bestv, v);
      }
      best[static_cast<size_t>(c)] = bestv;
    }

    md << "\n## " << (region == kStateAverageLabel ? "State average" : region) << "\n\n";
    md << "| Method | RMSE 1wk | RMSE 2wk | MAE 1wk | MAE 2wk | Cor 1wk | Cor 2wk |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : table) {
      md << "| " << r.method;
      const auto v = cols(r);
      for (int c = 0; c < 6; ++c) {
        const double x = v[static_cast<size_t>(c)];
        const bool flagged = !std::isnan(x) && x == best[static_cast<size_t>(c)];
        md << " | " << (flagged ? "**" + fmt3(x) + "**" : fmt3(x));
      }
      md << " |\n";
    }
  }
  md.close();

  // One chart per real region.
  static const std::vector<std::string> palette = {"#d62728", "#bcbd22", "#17becf",
                                                   "#2ca02c", "#1f77b4", "#9467bd",
                                                   "#8c564b", "#e377c2"};
  std::set<std::string> chart_regions;
  for (const auto& f : forecasts) chart_regions.insert(f.region.code());
  for (const auto& region : chart_regions) {
    std::vector<svg::Panel> panels(2);
    panels[0].title = "1 week ahead (weekly totals)";
    panels[1].title = "2 weeks ahead (weekly totals)";

    std::vector<std::string> methods;
    for (const auto& f : forecasts) {
      if (f.region.code() == region &&
          std::find(methods.begin(), methods.end(), f.method) == methods.end()) {
        methods.push_back(f.method);
      }
    }
    std::sort(methods.begin(), methods.end());

    for (int h = 0; h < 2; ++h) {
      svg::LineSeries truth_line{"truth", "#000000", {}};
      std::set<Date> weeks;
      for (const auto& f : forecasts) {
        if (f.region.code() == region && f.horizon_weeks == h + 1) weeks.insert(f.week_start);
      }
      for (Date wk : weeks) {
        if (auto t = truth.at(region, wk)) truth_line.points.emplace_back(wk, *t);
      }
      panels[static_cast<size_t>(h)].series.push_back(std::move(truth_line));
      for (size_t mi = 0; mi < methods.size(); ++mi) {
        svg::LineSeries line{methods[mi], palette[mi % palette.size()], {}};
        for (const auto& f : forecasts) {
          if (f.region.code() == region && f.method == methods[mi] && f.horizon_weeks == h + 1) {
            line.points.emplace_back(f.week_start, f.value);
          }
        }
        panels[static_cast<size_t>(h)].series.push_back(std::move(line));
      }
    }
    svg::write_line_chart(opts.out_dir / (region + "_forecasts.svg"),
                          region + " weekly hospitalizations: truth vs forecasts", panels);
  }
}

}  // namespace argocast::evaluate
