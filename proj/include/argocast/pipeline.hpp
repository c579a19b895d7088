#pragma once

#include "argocast/config.hpp"
#include "argocast/evaluate.hpp"

namespace argocast::pipeline {

// Prints each violated invariant; returns the count (0 means valid).
int cmd_validate(const config::RunConfig& cfg);

// Term-selection stage: IQR filter, per-term optimal lag, 7-day smoothing,
// correlation screen. Writes terms.csv and lags.csv into the output dir.
void cmd_prepare(const config::RunConfig& cfg);

// Rolling backtest over every configured method; writes forecasts.csv,
// optionally forecasts_daily.csv, per-date checkpoints, and
// run_metadata.json. `fresh` discards any existing checkpoint.
void cmd_backtest(const config::RunConfig& cfg, bool fresh = false);

// Scores forecasts (plus optional external forecast files) against the
// hospitalization truth and renders metrics.csv, report.md and SVG charts.
void cmd_report(const config::RunConfig& cfg);

// Loaded, preprocessed inputs shared by backtest and report.
struct PreparedInputs {
  std::vector<DailySeries> hospitalizations;
  std::vector<DailySeries> cases;
  std::vector<DailySeries> vaccination;
  std::vector<DailySeries> smoothed_queries;  // selected terms only
  AdjacencyMap adjacency;
  preprocess::TermSelection terms;
  preprocess::LagTable lags;
};

PreparedInputs load_inputs(const config::RunConfig& cfg, bool need_terms);

}  // namespace argocast::pipeline
