#include "argocast/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "argocast/design.hpp"
#include "argocast/errors.hpp"
#include "argocast/util.hpp"

namespace argocast::pipeline {

namespace {

using nlohmann::json;

const DailySeries& national_series(const std::vector<DailySeries>& all, const char* what) {
  for (const auto& s : all) {
    if (s.region.is_national()) return s;
  }
  throw ValidationError(std::string("no national (US) series in the ") + what + " file");
}

std::string config_hash(const config::RunConfig& cfg) {
  std::uint64_t h = fnv1a64(config::config_to_json(cfg).dump());
  h = fnv1a64("hosp", h ^ hash_file(cfg.hospitalizations.path));
  h = fnv1a64("cases", h ^ hash_file(cfg.cases.path));
  h = fnv1a64("vacc", h ^ hash_file(cfg.vaccination.path));
  h = fnv1a64("queries", h ^ hash_file(cfg.queries_path));
  return to_hex(h);
}

}  // namespace

int cmd_validate(const config::RunConfig& cfg) {
  const auto violations = config::validate_config(cfg);
  for (const auto& v : violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
  if (violations.empty()) std::fprintf(stdout, "config ok: %s\n", cfg.config_path.string().c_str());
  return static_cast<int>(violations.size());
}

void cmd_prepare(const config::RunConfig& cfg) {
  const auto queries = load_query_series(cfg.queries_path);
  const auto hosp = load_series(cfg.hospitalizations.path, VariableKind::Hospitalizations,
                                cfg.hospitalizations.layout);
  const DailySeries& national = national_series(hosp, "hospitalizations");
  const auto& sel = cfg.selection;

  preprocess::LagTable all_lags;
  std::vector<DailySeries> smoothed;
  smoothed.reserve(queries.size());
  for (const auto& q : queries) {
    const auto filtered = preprocess::iqr_filter(q, sel.iqr_window, sel.iqr_k_sd);
    all_lags.entries[q.variable.term] =
        preprocess::optimal_lag(filtered, national, sel.window_start, sel.window_end, sel.lag_min,
                                sel.lag_max);
    smoothed.push_back(preprocess::moving_average(filtered, sel.ma_window));
  }

  const auto selection =
      preprocess::select_terms(smoothed, national, all_lags, sel.window_start, sel.window_end,
                               {sel.threshold, sel.k_max});

  preprocess::LagTable selected_lags;
  for (const auto& term : selection.terms) {
    selected_lags.entries[term] = all_lags.lag_for(term);
  }
  std::filesystem::create_directories(cfg.output_dir);
  selection.write_csv(cfg.output_dir / "terms.csv", selected_lags);
  selected_lags.write_csv(cfg.output_dir / "lags.csv");
  std::fprintf(stdout, "selected %zu terms -> %s\n", selection.terms.size(),
               (cfg.output_dir / "terms.csv").string().c_str());
}

PreparedInputs load_inputs(const config::RunConfig& cfg, bool need_terms) {
  PreparedInputs in;
  in.hospitalizations = load_series(cfg.hospitalizations.path, VariableKind::Hospitalizations,
                                    cfg.hospitalizations.layout);
  in.cases = load_series(cfg.cases.path, VariableKind::Cases, cfg.cases.layout);
  in.vaccination =
      load_series(cfg.vaccination.path, VariableKind::VaccinationPct, cfg.vaccination.layout);
  in.adjacency = AdjacencyMap::load_csv(cfg.adjacency_path);

  if (!need_terms) return in;

  const auto terms_path = cfg.output_dir / "terms.csv";
  const auto lags_path = cfg.output_dir / "lags.csv";
  if (!std::filesystem::exists(terms_path) || !std::filesystem::exists(lags_path)) {
    throw ValidationError("no term selection found in " + cfg.output_dir.string() +
                          "; run `prepare` first");
  }
  in.terms = preprocess::TermSelection::read_csv(terms_path);
  in.lags = preprocess::LagTable::read_csv(lags_path);

  const auto queries = load_query_series(cfg.queries_path);
  std::set<std::string> wanted(in.terms.terms.begin(), in.terms.terms.end());
  for (const auto& q : queries) {
    if (!wanted.count(q.variable.term)) continue;
    const auto filtered = preprocess::iqr_filter(q, cfg.selection.iqr_window, cfg.selection.iqr_k_sd);
    in.smoothed_queries.push_back(preprocess::moving_average(filtered, cfg.selection.ma_window));
    wanted.erase(q.variable.term);
  }
  if (!wanted.empty()) {
    throw ValidationError("query file lacks selected term '" + *wanted.begin() + "'");
  }
  return in;
}

void cmd_backtest(const config::RunConfig& cfg, bool fresh) {
  auto inputs = load_inputs(cfg, /*need_terms=*/true);

  auto bt = cfg.backtest;
  if (bt.regions.empty()) {
    for (const auto& s : inputs.hospitalizations) bt.regions.push_back(s.region);
    std::sort(bt.regions.begin(), bt.regions.end());
  }
  for (const auto& r : bt.regions) {
    for (const auto& m : inputs.adjacency.neighbors(r)) {
      const bool present = std::any_of(inputs.hospitalizations.begin(),
                                       inputs.hospitalizations.end(),
                                       [&](const DailySeries& s) { return s.region == m; });
      if (!present) {
        throw ValidationError("hospitalizations for " + m.code() + " (neighbor of " + r.code() +
                              ") are missing from the input file");
      }
    }
  }

  const Date first_monday = bt.start.monday_on_or_after();
  const Date last_monday = bt.end.monday_on_or_before();
  const Date bundle_start = first_monday - (bt.window + 28);

  std::vector<DailySeries> all;
  all.insert(all.end(), inputs.hospitalizations.begin(), inputs.hospitalizations.end());
  all.insert(all.end(), inputs.cases.begin(), inputs.cases.end());
  all.insert(all.end(), inputs.vaccination.begin(), inputs.vaccination.end());
  all.insert(all.end(), inputs.smoothed_queries.begin(), inputs.smoothed_queries.end());
  const DataBundle bundle = align_bundle(all, inputs.adjacency, bundle_start, last_monday);

  const std::string hash = config_hash(cfg);
  const auto checkpoint_dir = cfg.output_dir / "checkpoints";
  if (fresh) std::filesystem::remove_all(checkpoint_dir);
  backtest::CheckpointStore checkpoint(checkpoint_dir, hash);

  const auto records = backtest::run_backtest(bundle, bt, inputs.terms, inputs.lags, &checkpoint);

  backtest::write_forecast_csv(cfg.output_dir / "forecasts.csv", records);
  if (cfg.write_daily) {
    backtest::write_daily_csv(cfg.output_dir / "forecasts_daily.csv", records);
  }

  json meta;
  meta["tool"] = "argocast 0.1.0";
  meta["config"] = config::config_to_json(cfg);
  meta["config_hash"] = hash;
  meta["input_hashes"] = {{"hospitalizations", to_hex(hash_file(cfg.hospitalizations.path))},
                          {"cases", to_hex(hash_file(cfg.cases.path))},
                          {"vaccination", to_hex(hash_file(cfg.vaccination.path))},
                          {"queries", to_hex(hash_file(cfg.queries_path))},
                          {"adjacency", to_hex(hash_file(cfg.adjacency_path))}};
  meta["flags"] = {{"clip_negative_daily", true},
                   {"cv_mode", bt.solver.cv_mode == solver::CvMode::Blocked ? "blocked" : "random"},
                   {"lambda_policy", bt.solver.lambda_policy == backtest::LambdaPolicy::PerFit
                                         ? "per_fit"
                                         : "first_fit"},
                   {"weekly_lambda_reselection",
                    bt.solver.lambda_policy == backtest::LambdaPolicy::PerFit}};
  meta["seed"] = bt.seed;
  json terms_json = json::array();
  for (size_t i = 0; i < inputs.terms.terms.size(); ++i) {
    terms_json.push_back({{"term", inputs.terms.terms[i]},
                          {"lag", inputs.lags.lag_for(inputs.terms.terms[i])},
                          {"correlation", inputs.terms.correlations[i]}});
  }
  meta["terms"] = terms_json;
  json dates = json::array();
  for (Date t = first_monday; t <= last_monday; t += 7) dates.push_back(t.to_iso());
  meta["issue_dates"] = dates;
  std::ofstream out(cfg.output_dir / "run_metadata.json");
  out << meta.dump(2) << '\n';

  std::fprintf(stdout, "wrote %zu forecast records -> %s\n", records.size(),
               (cfg.output_dir / "forecasts.csv").string().c_str());
}

void cmd_report(const config::RunConfig& cfg) {
  const auto forecasts_path = cfg.output_dir / "forecasts.csv";
  if (!std::filesystem::exists(forecasts_path)) {
    throw ValidationError("no forecast files found in " + cfg.output_dir.string() +
                          "; run `backtest` first");
  }
  auto forecasts = backtest::read_forecast_csv(forecasts_path);
  if (forecasts.empty()) throw ValidationError("forecast file is empty: " + forecasts_path.string());

  const auto hosp = load_series(cfg.hospitalizations.path, VariableKind::Hospitalizations,
                                cfg.hospitalizations.layout);

  // Bins our own forecasts use; external rows must match them.
  std::set<std::tuple<std::string, std::string, int>> own_bins;
  for (const auto& f : forecasts) {
    own_bins.insert({f.region.code(), f.week_start.to_iso(), f.horizon_weeks});
  }

  if (cfg.external_forecasts) {
    const auto external = backtest::read_forecast_csv(*cfg.external_forecasts);
    size_t excluded = 0;
    for (const auto& e : external) {
      if (own_bins.count({e.region.code(), e.week_start.to_iso(), e.horizon_weeks})) {
        forecasts.push_back(e);
      } else {
        ++excluded;
      }
    }
    if (excluded > 0) {
      log_warn(std::to_string(excluded) + " external forecast rows excluded (mismatched dates)");
    }
  }

  const auto truth = evaluate::WeeklyTruth::from_daily(hosp, forecasts);
  const auto rows = evaluate::score(forecasts, truth);
  evaluate::render_report(rows, forecasts, truth, {cfg.output_dir});
  std::fprintf(stdout, "report written to %s\n", (cfg.output_dir / "report.md").string().c_str());
}

}  // namespace argocast::pipeline
