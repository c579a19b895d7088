#include "argocast/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "argocast/csv.hpp"
#include "argocast/design.hpp"
#include "argocast/errors.hpp"
#include "argocast/util.hpp"

namespace argocast::backtest {

namespace {

using nlohmann::json;

// Runs tasks on up to `jobs` threads; rethrows the first failure in task order.
void run_parallel(const std::vector<std::function<void()>>& tasks, int jobs) {
  if (jobs <= 1 || tasks.size() <= 1) {
    for (const auto& t : tasks) t();
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(jobs, static_cast<int>(tasks.size()));
  pool.reserve(static_cast<size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t mix_seed(std::uint64_t seed, const RegionId& region, Date issue, int horizon) {
  std::uint64_t h = fnv1a64(region.code(), seed ^ 0x9E3779B97F4A7C15ULL);
  h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(issue.days())) * 0xBF58476D1CE4E5B9ULL;
  h ^= static_cast<std::uint64_t>(horizon) * 0x94D049BB133111EBULL;
  return h;
}

void finalize_record(ForecastRecord& rec) {
  for (double& v : rec.daily) v = std::max(0.0, v);
  auto [w1, w2] = aggregate_weekly(std::span<const double>(rec.daily.data(), rec.daily.size()));
  rec.week1 = w1;
  rec.week2 = w2;
}

json record_to_json(const ForecastRecord& r) {
  return json{{"region", r.region.code()},
              {"issue_date", r.issue_date.to_iso()},
              {"method", to_string(r.method)},
              {"daily", r.daily},
              {"week1", r.week1},
              {"week2", r.week2}};
}

ForecastRecord record_from_json(const json& j) {
  ForecastRecord r;
  r.region = RegionId::parse(j.at("region").get<std::string>());
  r.issue_date = Date::parse(j.at("issue_date").get<std::string>());
  r.method = method_from_string(j.at("method").get<std::string>());
  const auto daily = j.at("daily").get<std::vector<double>>();
  if (daily.size() != 14) throw ValidationError("checkpoint record must have 14 daily values");
  std::copy(daily.begin(), daily.end(), r.daily.begin());
  r.week1 = j.at("week1").get<double>();
  r.week2 = j.at("week2").get<double>();
  return r;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::ARGO:
      return "ARGO";
    case Method::Naive:
      return "Naive";
    case Method::AR7:
      return "AR7";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "ARGO") return Method::ARGO;
  if (s == "Naive") return Method::Naive;
  if (s == "AR7") return Method::AR7;
  throw ValidationError("unknown method '" + s + "'");
}

CheckpointStore::CheckpointStore(std::filesystem::path dir, std::string config_hash)
    : dir_(std::move(dir)), config_hash_(std::move(config_hash)) {
  std::filesystem::create_directories(dir_);
  const auto index = dir_ / "checkpoint.json";
  if (!std::filesystem::exists(index)) return;
  std::ifstream in(index);
  json j = json::parse(in);
  if (j.at("config_hash").get<std::string>() != config_hash_) {
    log_warn("checkpoint in " + dir_.string() + " belongs to a different config; ignoring it");
    return;
  }
  for (const auto& d : j.at("completed")) completed_.insert(Date::parse(d.get<std::string>()));
}

std::vector<ForecastRecord> CheckpointStore::load(Date issue_date) const {
  const auto path = dir_ / ("records_" + issue_date.to_iso() + ".json");
  std::ifstream in(path);
  if (!in) throw IoError("missing checkpoint records: " + path.string());
  json j = json::parse(in);
  std::vector<ForecastRecord> out;
  for (const auto& item : j) out.push_back(record_from_json(item));
  return out;
}

void CheckpointStore::save(Date issue_date, const std::vector<ForecastRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  {
    std::ofstream out(dir_ / ("records_" + issue_date.to_iso() + ".json"));
    out << arr.dump(2) << '\n';
  }
  completed_.insert(issue_date);
  json index;
  index["config_hash"] = config_hash_;
  auto list = json::array();
  for (const auto& d : completed_) list.push_back(d.to_iso());
  index["completed"] = list;
  std::ofstream out(dir_ / "checkpoint.json");
  out << index.dump(2) << '\n';
}

std::pair<double, double> aggregate_weekly(std::span<const double> daily) {
  if (daily.size() != 14) {
    throw ShapeError("weekly aggregation needs exactly 14 daily values, got " +
                     std::to_string(daily.size()));
  }
  double w1 = 0.0, w2 = 0.0;
  for (int i = 0; i < 7; ++i) w1 += daily[static_cast<size_t>(i)];
  for (int i = 7; i < 14; ++i) w2 += daily[static_cast<size_t>(i)];
  return {w1, w2};
}

ForecastRecord naive_forecast(const DataBundle& bundle, const RegionId& region, Date issue_date) {
  const Variable hosp = Variable::hospitalizations();
  const auto& s = bundle.series(region, hosp);
  if (s.start_date > issue_date - 6 || s.end_date() < issue_date) {
    throw InsufficientHistoryError("naive forecast for " + region.code() + " at " +
                                   issue_date.to_iso() + " needs the trailing 7 days");
  }
  ForecastRecord rec;
  rec.region = region;
  rec.issue_date = issue_date;
  rec.method = Method::Naive;
  for (int i = 1; i <= 14; ++i) {
    rec.daily[static_cast<size_t>(i - 1)] = s.at(issue_date - 7 + ((i - 1) % 7) + 1);
  }
  finalize_record(rec);
  return rec;
}

ForecastRecord ar7_forecast(const DataBundle& bundle, const RegionId& region, Date issue_date,
                            int window) {
  constexpr int kLags = 7;
  const Variable hosp = Variable::hospitalizations();
  const auto& s = bundle.series(region, hosp);
  if (s.start_date > issue_date - window - kLags + 1 || s.end_date() < issue_date) {
    throw InsufficientHistoryError("AR7 forecast for " + region.code() + " at " +
                                   issue_date.to_iso() + " needs " +
                                   std::to_string(window + kLags) + " days of history");
  }

  Eigen::MatrixXd A(window, kLags + 1);
  Eigen::VectorXd b(window);
  for (int r = 0; r < window; ++r) {
    const Date t = issue_date - window + 1 + r;
    A(r, 0) = 1.0;
    for (int i = 1; i <= kLags; ++i) A(r, i) = s.at(t - i);
    b(r) = s.at(t);
  }
  Eigen::MatrixXd G = A.transpose() * A;
  const Eigen::VectorXd g = A.transpose() * b;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible()) {
    log_warn("AR7 normal equations singular for " + region.code() + " at " + issue_date.to_iso() +
             "; adding ridge jitter 1e-8");
    G += 1e-8 * Eigen::MatrixXd::Identity(G.rows(), G.cols());
    lu.compute(G);
  }
  const Eigen::VectorXd coef = lu.solve(g);

  // Recursive multi-step prediction; clipping happens at emission only.
  std::vector<double> path(static_cast<size_t>(kLags + 14));
  for (int i = 0; i < kLags; ++i) {
    path[static_cast<size_t>(i)] = s.at(issue_date - kLags + 1 + i);
  }
  ForecastRecord rec;
  rec.region = region;
  rec.issue_date = issue_date;
  rec.method = Method::AR7;
  for (int step = 0; step < 14; ++step) {
    double pred = coef(0);
    for (int i = 1; i <= kLags; ++i) pred += coef(i) * path[static_cast<size_t>(kLags + step - i)];
    path[static_cast<size_t>(kLags + step)] = pred;
    rec.daily[static_cast<size_t>(step)] = pred;
  }
  finalize_record(rec);
  return rec;
}

std::vector<ForecastRecord> run_backtest(const DataBundle& bundle, const BacktestConfig& cfg,
                                         const preprocess::TermSelection& terms,
                                         const preprocess::LagTable& lags,
                                         CheckpointStore* checkpoint) {
  if (cfg.end < cfg.start) throw ValidationError("backtest start is after end");
  if (cfg.regions.empty()) throw ValidationError("backtest needs at least one region");
  if (cfg.methods.empty()) throw ValidationError("backtest needs at least one method");
  Date start = cfg.start.monday_on_or_after();
  Date end = cfg.end.monday_on_or_before();
  if (start != cfg.start) log_warn("backtest start rounded forward to Monday " + start.to_iso());
  if (end != cfg.end) log_warn("backtest end rounded backward to Monday " + end.to_iso());
  if (end < start) throw ValidationError("no Mondays inside the backtest range");

  const bool needs_argo = std::count(cfg.methods.begin(), cfg.methods.end(), Method::ARGO) > 0;
  if (needs_argo && bundle.start() > start - (cfg.window + 28)) {
    throw InsufficientHistoryError("bundle must start on or before " +
                                   (start - (cfg.window + 28)).to_iso() +
                                   " to cover the first training window");
  }
  if (bundle.end() < end) {
    throw InsufficientHistoryError("bundle ends " + bundle.end().to_iso() +
                                   ", before the last issue date " + end.to_iso());
  }

  std::vector<Date> mondays;
  for (Date t = start; t <= end; t += 7) mondays.push_back(t);

  // lambda cache for LambdaPolicy::FirstFit, keyed by (region, horizon)
  std::map<std::pair<RegionId, int>, double> lambda_cache;
  std::mutex cache_mutex;

  const solver::FitOptions fit_opts{cfg.solver.tol, cfg.solver.max_iter, false};
  std::vector<ForecastRecord> all;

  for (Date issue : mondays) {
    if (checkpoint && checkpoint->completed().count(issue)) {
      auto cached = checkpoint->load(issue);
      all.insert(all.end(), cached.begin(), cached.end());
      continue;
    }

    struct ArgoCell {
      double value = 0.0;
      double lambda = 0.0;
    };
    // One slot per (region index, horizon); written concurrently, read after the barrier.
    std::vector<std::array<ArgoCell, 14>> argo_cells(cfg.regions.size());
    std::vector<ForecastRecord> date_records;
    std::mutex record_mutex;

    std::vector<std::function<void()>> tasks;
    for (size_t ri = 0; ri < cfg.regions.size(); ++ri) {
      const RegionId region = cfg.regions[ri];
      for (Method m : cfg.methods) {
        if (m == Method::ARGO) {
          for (int l = 1; l <= 14; ++l) {
            tasks.push_back([&, ri, region, l, issue] {
              const auto dm = design::build_design(bundle, region, l, issue, cfg.window, terms, lags);
              const auto w = solver::decay_weights(cfg.window, cfg.omega);
              double lambda = 0.0;
              std::vector<std::pair<double, double>> curve;
              bool have_cached = false;
              if (cfg.solver.lambda_policy == LambdaPolicy::FirstFit) {
                std::lock_guard<std::mutex> lock(cache_mutex);
                auto it = lambda_cache.find({region, l});
                if (it != lambda_cache.end()) {
                  lambda = it->second;
                  have_cached = true;
                }
              }
              if (!have_cached) {
                const auto grid = solver::lambda_grid(dm.rows, dm.target, w, cfg.solver.grid_size,
                                                      cfg.solver.grid_min_ratio);
                const auto cv = solver::cross_validate_lambda(
                    dm.rows, dm.target, w, grid, cfg.solver.folds, cfg.solver.cv_mode,
                    mix_seed(cfg.seed, region, issue, l), fit_opts);
                lambda = cv.lambda_star;
                curve = cv.curve;
                if (cfg.solver.lambda_policy == LambdaPolicy::FirstFit) {
                  std::lock_guard<std::mutex> lock(cache_mutex);
                  lambda_cache.emplace(std::make_pair(region, l), lambda);
                }
              }
              auto fit = solver::fit_weighted_lasso(dm.rows, dm.target, w, lambda, fit_opts);
              fit.cv_curve = std::move(curve);
              const auto row = design::build_feature_row(bundle, region, l, issue, terms, lags);
              argo_cells[ri][static_cast<size_t>(l - 1)] =
                  ArgoCell{solver::predict(fit, row), lambda};
            });
          }
        } else if (m == Method::Naive) {
          tasks.push_back([&, region, issue] {
            auto rec = naive_forecast(bundle, region, issue);
            std::lock_guard<std::mutex> lock(record_mutex);
            date_records.push_back(std::move(rec));
          });
        } else {
          tasks.push_back([&, region, issue] {
            auto rec = ar7_forecast(bundle, region, issue, cfg.window);
            std::lock_guard<std::mutex> lock(record_mutex);
            date_records.push_back(std::move(rec));
          });
        }
      }
    }
    run_parallel(tasks, cfg.jobs);

    if (needs_argo) {
      for (size_t ri = 0; ri < cfg.regions.size(); ++ri) {
        ForecastRecord rec;
        rec.region = cfg.regions[ri];
        rec.issue_date = issue;
        rec.method = Method::ARGO;
        for (int l = 1; l <= 14; ++l) {
          rec.daily[static_cast<size_t>(l - 1)] = argo_cells[ri][static_cast<size_t>(l - 1)].value;
        }
        finalize_record(rec);
        date_records.push_back(std::move(rec));
      }
    }

    std::sort(date_records.begin(), date_records.end(),
              [](const ForecastRecord& a, const ForecastRecord& b) {
                if (a.region.code() != b.region.code()) return a.region.code() < b.region.code();
                return to_string(a.method) < to_string(b.method);
              });
    if (checkpoint) checkpoint->save(issue, date_records);
    all.insert(all.end(), date_records.begin(), date_records.end());
  }

  std::sort(all.begin(), all.end(), [](const ForecastRecord& a, const ForecastRecord& b) {
    if (a.issue_date != b.issue_date) return a.issue_date < b.issue_date;
    if (a.region.code() != b.region.code()) return a.region.code() < b.region.code();
    return to_string(a.method) < to_string(b.method);
  });
  return all;
}

std::vector<WeeklyForecast> to_weekly(const std::vector<ForecastRecord>& records) {
  std::vector<WeeklyForecast> out;
  out.reserve(records.size() * 2);
  for (const auto& r : records) {
    out.push_back({to_string(r.method), r.region, r.issue_date, r.issue_date + 1, 1, r.week1});
    out.push_back({to_string(r.method), r.region, r.issue_date, r.issue_date + 8, 2, r.week2});
  }
  return out;
}

void write_forecast_csv(const std::filesystem::path& path,
                        const std::vector<ForecastRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& w : to_weekly(records)) {
    rows.push_back({w.method, w.region.code(), w.issue_date.to_iso(), w.week_start.to_iso(),
                    std::to_string(w.horizon_weeks), format_value(w.value)});
  }
  write_csv(path, {"method", "region", "issue_date", "target_week_start", "horizon_weeks", "value"},
            rows);
}

std::vector<WeeklyForecast> read_forecast_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> expect = {"method", "region",        "issue_date",
                                           "target_week_start",       "horizon_weeks", "value"};
  if (table.header != expect) {
    throw CsvError("forecast file " + path.string() +
                   " must have columns (method, region, issue_date, target_week_start, "
                   "horizon_weeks, value)");
  }
  std::vector<WeeklyForecast> out;
  for (const auto& row : table.rows) {
    WeeklyForecast w;
    w.method = row[0];
    w.region = RegionId::parse(row[1]);
    w.issue_date = Date::parse(row[2]);
    w.week_start = Date::parse(row[3]);
    w.horizon_weeks = std::stoi(row[4]);
    w.value = std::stod(row[5]);
    out.push_back(std::move(w));
  }
  return out;
}

void write_daily_csv(const std::filesystem::path& path,
                     const std::vector<ForecastRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : records) {
    for (int i = 1; i <= 14; ++i) {
      rows.push_back({to_string(r.method), r.region.code(), r.issue_date.to_iso(),
                      (r.issue_date + i).to_iso(), std::to_string(i),
                      format_value(r.daily[static_cast<size_t>(i - 1)])});
    }
  }
  write_csv(path, {"method", "region", "issue_date", "target_date", "horizon_days", "value"}, rows);
}

}  // namespace argocast::backtest
