#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "argocast/series.hpp"

namespace argocast::synth {

// Synthetic epidemic fixture: hospitalizations follow a linear recursion on
// their own lags, lagged cases and lagged query signals around a shared
// latent wave, so the regression model's feature structure is exactly
// recoverable. Query terms lead the wave by known per-term offsets; two
// extra terms are pure noise and should never be selected.
struct SynthSpec {
  Date start = Date::from_ymd(2020, 8, 12);
  Date end = Date::from_ymd(2021, 6, 21);
  std::uint64_t seed = 99;
  // Regions to forecast; every neighbor a state model needs must be listed
  // in hosp_extra so its hospitalization series exists.
  std::vector<std::string> forecast_regions = {"US", "ME", "NH"};
  std::vector<std::string> hosp_extra = {"MA", "VT"};
  int n_signal_terms = 6;
  int n_noise_terms = 2;
};

struct SynthData {
  std::vector<DailySeries> hospitalizations;
  std::vector<DailySeries> cases;
  std::vector<DailySeries> vaccination;
  std::vector<DailySeries> queries;
  std::map<std::string, int> true_lags;  // signal terms only
};

SynthData generate(const SynthSpec& spec);

// Writes hosp.csv, cases.csv, vacc.csv, queries.csv (all wide layout).
void write_csvs(const SynthData& data, const std::filesystem::path& dir);

}  // namespace argocast::synth
