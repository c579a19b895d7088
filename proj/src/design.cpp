#include "argocast/design.hpp"

#include <algorithm>

#include "argocast/csv.hpp"
#include "argocast/errors.hpp"

namespace argocast::design {

std::string to_string(FeatureGroupKind kind) {
  switch (kind) {
    case FeatureGroupKind::Intercept:
      return "intercept";
    case FeatureGroupKind::AutoLag:
      return "auto_lag";
    case FeatureGroupKind::CaseLag:
      return "case_lag";
    case FeatureGroupKind::Neighbor:
      return "neighbor";
    case FeatureGroupKind::Vaccination:
      return "vaccination";
    case FeatureGroupKind::SearchTerm:
      return "search_term";
    case FeatureGroupKind::Weekday:
      return "weekday";
  }
  return "?";
}

LagSets lag_sets(int horizon) {
  if (horizon < 1 || horizon > 14) {
    throw ValidationError("horizon must be in 1..14, got " + std::to_string(horizon));
  }
  LagSets out;
  out.case_lags = {std::max(7, horizon), std::max(28, horizon)};
  std::sort(out.case_lags.begin(), out.case_lags.end());
  out.case_lags.erase(std::unique(out.case_lags.begin(), out.case_lags.end()),
                      out.case_lags.end());
  out.vaccination_lag = std::max(7, horizon);
  out.auto_depth = 6;
  return out;
}

std::array<double, 6> weekday_dummies(Date d) {
  std::array<double, 6> out{};
  const int wd = d.weekday();  // 0 = Sunday .. 6 = Saturday
  if (wd >= 1) out[wd - 1] = 1.0;
  return out;
}

std::vector<FeatureGroup> feature_layout(const DataBundle& bundle, const RegionId& region,
                                         int horizon, const preprocess::TermSelection& terms) {
  const LagSets lags = lag_sets(horizon);
  std::vector<FeatureGroup> groups;
  groups.push_back({FeatureGroupKind::Intercept, {"intercept"}, -1});

  int offset = 0;
  auto add = [&](FeatureGroupKind kind, std::vector<std::string> labels) {
    const int n = static_cast<int>(labels.size());
    groups.push_back({kind, std::move(labels), offset});
    offset += n;
  };

  std::vector<std::string> auto_labels;
  for (int i = 0; i <= lags.auto_depth; ++i) auto_labels.push_back("y_lag" + std::to_string(i));
  add(FeatureGroupKind::AutoLag, std::move(auto_labels));

  std::vector<std::string> case_labels;
  for (int j : lags.case_lags) case_labels.push_back("cases_lag" + std::to_string(j));
  add(FeatureGroupKind::CaseLag, std::move(case_labels));

  if (!region.is_national()) {
    std::vector<std::string> neighbor_labels;
    for (const auto& m : bundle.adjacency().neighbors(region)) {
      neighbor_labels.push_back("neighbor_" + m.code());
    }
    if (!neighbor_labels.empty()) add(FeatureGroupKind::Neighbor, std::move(neighbor_labels));
  }

  add(FeatureGroupKind::Vaccination, {"vacc_lag" + std::to_string(lags.vaccination_lag)});

  std::vector<std::string> term_labels;
  for (const auto& t : terms.terms) term_labels.push_back("term:" + t);
  add(FeatureGroupKind::SearchTerm, std::move(term_labels));

  add(FeatureGroupKind::Weekday, {"mon", "tue", "wed", "thu", "fri", "sat"});
  return groups;
}

Eigen::VectorXd build_feature_row(const DataBundle& bundle, const RegionId& region, int horizon,
                                  Date base, const preprocess::TermSelection& terms,
                                  const preprocess::LagTable& lags) {
  const LagSets ls = lag_sets(horizon);
  const Variable hosp = Variable::hospitalizations();
  std::vector<double> row;

  for (int i = 0; i <= ls.auto_depth; ++i) {
    row.push_back(bundle.value(region, hosp, base - i));
  }
  for (int j : ls.case_lags) {
    row.push_back(bundle.value(region, Variable::cases(), base + horizon - j));
  }
  if (!region.is_national()) {
    for (const auto& m : bundle.adjacency().neighbors(region)) {
      row.push_back(bundle.value(m, hosp, base));
    }
  }
  row.push_back(bundle.value(region, Variable::vaccination(), base + horizon - ls.vaccination_lag));
  for (const auto& term : terms.terms) {
    const int adjusted = std::max(lags.lag_for(term), horizon);
    row.push_back(bundle.value(RegionId::parse("US"), Variable::query(term),
                               base + horizon - adjusted));
  }
  for (double d : weekday_dummies(base + horizon)) row.push_back(d);

  return Eigen::Map<Eigen::VectorXd>(row.data(), static_cast<long>(row.size()));
}

DesignMatrix build_design(const DataBundle& bundle, const RegionId& region, int horizon,
                          Date issue_date, int training_window,
                          const preprocess::TermSelection& terms,
                          const preprocess::LagTable& lags) {
  if (training_window < 2) throw ValidationError("training window must be >= 2");
  const LagSets ls = lag_sets(horizon);
  const Date t0 = issue_date - training_window - horizon + 1;

  // Earliest day any feature of the first row reaches back to.
  int max_term_lag = horizon;
  for (const auto& term : terms.terms) {
    max_term_lag = std::max(max_term_lag, lags.lag_for(term));
  }
  const Date earliest = std::min({t0 - ls.auto_depth, t0 + horizon - ls.case_lags.back(),
                                  t0 + horizon - max_term_lag});
  if (earliest < bundle.start() || issue_date > bundle.end()) {
    throw InsufficientHistoryError(
        "design for " + region.code() + " l=" + std::to_string(horizon) + " issued " +
        issue_date.to_iso() + " needs " + earliest.to_iso() + ".." + issue_date.to_iso() +
        ", bundle covers " + bundle.start().to_iso() + ".." + bundle.end().to_iso());
  }

  DesignMatrix dm;
  dm.horizon = horizon;
  dm.region = region;
  dm.groups = feature_layout(bundle, region, horizon, terms);

  const int n = training_window;
  Eigen::VectorXd first = build_feature_row(bundle, region, horizon, t0, terms, lags);
  dm.rows.resize(n, first.size());
  dm.target.resize(n);
  dm.row_dates.reserve(n);

  const Variable hosp = Variable::hospitalizations();
  for (int r = 0; r < n; ++r) {
    const Date t = t0 + r;
    dm.rows.row(r) = (r == 0) ? first.transpose()
                              : build_feature_row(bundle, region, horizon, t, terms, lags).transpose();
    dm.target(r) = bundle.value(region, hosp, t + horizon);
    dm.row_dates.push_back(t);
  }
  return dm;
}

std::vector<std::string> DesignMatrix::column_labels() const {
  std::vector<std::string> out;
  for (const auto& g : groups) {
    if (g.offset < 0) continue;
    out.insert(out.end(), g.column_labels.begin(), g.column_labels.end());
  }
  return out;
}

void dump_design_csv(const DesignMatrix& dm, const std::filesystem::path& path) {
  std::vector<std::string> header = {"date"};
  for (const auto& label : dm.column_labels()) header.push_back(label);
  header.push_back("target");
  std::vector<std::vector<std::string>> rows;
  for (int r = 0; r < dm.rows.rows(); ++r) {
    std::vector<std::string> row = {dm.row_dates[r].to_iso()};
    for (int c = 0; c < dm.cols(); ++c) row.push_back(format_value(dm.rows(r, c)));
    row.push_back(format_value(dm.target(r)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace argocast::design
