#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "argocast/bundle.hpp"
#include "argocast/preprocess.hpp"

namespace argocast::design {

enum class FeatureGroupKind {
  Intercept,
  AutoLag,
  CaseLag,
  Neighbor,
  Vaccination,
  SearchTerm,
  Weekday
};

std::string to_string(FeatureGroupKind kind);

// A contiguous block of design columns sharing one coefficient group.
// The intercept group has offset -1: it is estimated by the solver and
// never materialized as a matrix column.
struct FeatureGroup {
  FeatureGroupKind kind;
  std::vector<std::string> column_labels;
  int offset = -1;
};

// Lag index sets for horizon l: case lags J (ascending, deduplicated),
// the single vaccination lag Q, and the autoregressive depth I
// (hospitalization lags 0..I).
struct LagSets {
  std::vector<int> case_lags;
  int vaccination_lag;
  int auto_depth;
};

LagSets lag_sets(int horizon);

// Day-of-week one-hot block: positions 0..5 encode Monday..Saturday,
// Sunday is the all-zero baseline.
std::array<double, 6> weekday_dummies(Date d);

// Regression rows for one (region, horizon, issue date) and its
// companion target vector. Row t holds features observed up to day t and
// the target is the hospitalization count l days later.
struct DesignMatrix {
  Eigen::MatrixXd rows;
  Eigen::VectorXd target;
  std::vector<FeatureGroup> groups;
  std::vector<Date> row_dates;  // the base day t of each row
  int horizon = 1;
  RegionId region;

  int cols() const { return static_cast<int>(rows.cols()); }
  std::vector<std::string> column_labels() const;
};

// Column layout shared by training rows and the prediction row, in order:
// hospitalization lags 0..6, case lags J, neighbor same-day values
// (omitted for US), vaccination lag, one column per selected search term
// at its adjusted lag max(O_k, horizon), then 6 weekday dummies for the
// target day.
std::vector<FeatureGroup> feature_layout(const DataBundle& bundle, const RegionId& region,
                                         int horizon, const preprocess::TermSelection& terms);

Eigen::VectorXd build_feature_row(const DataBundle& bundle, const RegionId& region, int horizon,
                                  Date base, const preprocess::TermSelection& terms,
                                  const preprocess::LagTable& lags);

// Assembles the training window [T-M-l+1, T-l] for issue date T.
// Fails with InsufficientHistoryError if any required lag precedes the
// bundle start (rows are never silently dropped).
DesignMatrix build_design(const DataBundle& bundle, const RegionId& region, int horizon,
                          Date issue_date, int training_window,
                          const preprocess::TermSelection& terms,
                          const preprocess::LagTable& lags);

// Debug dump with labeled columns.
void dump_design_csv(const DesignMatrix& dm, const std::filesystem::path& path);

}  // namespace argocast::design
