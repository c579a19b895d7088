#include "argocast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "argocast/csv.hpp"
#include "argocast/errors.hpp"

namespace argocast::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RegionParams {
  double base;
  std::uint64_t noise_stream;
};

double region_base(const std::string& code) {
  if (code == "US") return 2000.0;
  // Deterministic small-state scale in [18, 130).
  double h = 0.0;
  for (char c : code) h = h * 31.0 + c;
  return 18.0 + std::fmod(h, 112.0);
}

}  // namespace

SynthData generate(const SynthSpec& spec) {
  const int lead = 30;  // latent wave extends past `end` for leading signals
  const int n_days = spec.end - spec.start + 1;
  if (n_days < 120) throw ValidationError("synthetic fixture needs at least 120 days");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Shared latent wave z(t) = exp(two sinusoids + slow AR(1) drift).
  const double phi1 = 2.0 * kPi * unif(rng);
  const double phi2 = 2.0 * kPi * unif(rng);
  std::vector<double> z(static_cast<size_t>(n_days + lead));
  double drift = 0.0;
  for (int t = 0; t < n_days + lead; ++t) {
    drift = 0.99 * drift + 0.015 * gauss(rng);
    const double s = 1.0 * std::sin(2.0 * kPi * t / 160.0 + phi1) +
                     0.55 * std::sin(2.0 * kPi * t / 75.0 + phi2) + drift;
    z[static_cast<size_t>(t)] = std::exp(s);
  }

  SynthData out;

  // Query terms: signal terms lead the wave by a known offset.
  static const std::vector<std::string> kSignalNames = {"term_fever",    "term_cough",
                                                        "term_fatigue",  "term_headache",
                                                        "term_chills",   "term_nausea",
                                                        "term_aches",    "term_dizzy"};
  static const std::vector<int> kOffsets = {3, 4, 5, 7, 9, 12, 10, 6};
  if (spec.n_signal_terms > static_cast<int>(kSignalNames.size())) {
    throw ValidationError("at most 8 signal terms supported");
  }
  std::vector<std::vector<double>> query_values;
  for (int k = 0; k < spec.n_signal_terms; ++k) {
    out.true_lags[kSignalNames[static_cast<size_t>(k)]] = kOffsets[static_cast<size_t>(k)];
    std::vector<double> v(static_cast<size_t>(n_days));
    for (int t = 0; t < n_days; ++t) {
      v[static_cast<size_t>(t)] =
          40.0 * z[static_cast<size_t>(t + kOffsets[static_cast<size_t>(k)])] *
          std::exp(0.12 * gauss(rng));
    }
    DailySeries s;
    s.region = RegionId::parse("US");
    s.variable = Variable::query(kSignalNames[static_cast<size_t>(k)]);
    s.start_date = spec.start;
    s.values = std::move(v);
    out.queries.push_back(std::move(s));
  }
  for (int k = 0; k < spec.n_noise_terms; ++k) {
    std::vector<double> v(static_cast<size_t>(n_days));
    for (int t = 0; t < n_days; ++t) {
      v[static_cast<size_t>(t)] = 20.0 * std::exp(0.3 * gauss(rng));
    }
    DailySeries s;
    s.region = RegionId::parse("US");
    s.variable = Variable::query("term_noise" + std::to_string(k + 1));
    s.start_date = spec.start;
    s.values = std::move(v);
    out.queries.push_back(std::move(s));
  }

  // Hospitalizations: per-region linear recursion in normalized units
  //   u(t) = mu + a1 u(t-1) + a2 u(t-2) + a3 u(t-3)
  //        + delta * z(t)*noise + beta * z(t-2)*noise + tau(dow) + eps.
  std::vector<std::string> hosp_regions = spec.forecast_regions;
  for (const auto& r : spec.hosp_extra) hosp_regions.push_back(r);
  std::sort(hosp_regions.begin(), hosp_regions.end());
  hosp_regions.erase(std::unique(hosp_regions.begin(), hosp_regions.end()), hosp_regions.end());

  constexpr double kMu = 0.02;
  constexpr double kAlpha[3] = {0.30, 0.15, 0.05};
  constexpr double kDelta = 0.35;
  constexpr double kBeta = 0.10;
  // Sunday..Saturday additive weekday effect in normalized units.
  constexpr double kTau[7] = {-0.05, 0.04, 0.01, 0.0, 0.0, -0.01, -0.03};

  std::map<std::string, std::vector<double>> cases_by_region;
  for (const auto& code : hosp_regions) {
    const double base = region_base(code);
    const Date first = spec.start;

    // Cases lead the wave by 5 days; generated for every hosp region,
    // emitted only for forecast regions.
    std::vector<double> cases(static_cast<size_t>(n_days));
    for (int t = 0; t < n_days; ++t) {
      cases[static_cast<size_t>(t)] =
          4.0 * base * z[static_cast<size_t>(t + 5)] * std::exp(0.08 * gauss(rng));
    }

    std::vector<double> u(static_cast<size_t>(n_days));
    for (int t = 0; t < n_days; ++t) {
      const double z_now = z[static_cast<size_t>(t)];
      const double z_trail = z[static_cast<size_t>(std::max(0, t - 2))];
      double val = kMu + kDelta * z_now * std::exp(0.05 * gauss(rng)) +
                   kBeta * z_trail * std::exp(0.05 * gauss(rng));
      for (int i = 0; i < 3; ++i) {
        if (t - 1 - i >= 0) val += kAlpha[i] * u[static_cast<size_t>(t - 1 - i)];
      }
      val += kTau[(first + t).weekday()];
      val += 0.02 * std::max(0.2, z_now) * gauss(rng);
      u[static_cast<size_t>(t)] = std::max(0.001, val);
    }

    DailySeries hosp;
    hosp.region = RegionId::parse(code);
    hosp.variable = Variable::hospitalizations();
    hosp.start_date = first;
    hosp.values.resize(static_cast<size_t>(n_days));
    for (int t = 0; t < n_days; ++t) {
      hosp.values[static_cast<size_t>(t)] = base * u[static_cast<size_t>(t)];
    }
    out.hospitalizations.push_back(std::move(hosp));
    cases_by_region[code] = std::move(cases);
  }

  for (const auto& code : spec.forecast_regions) {
    DailySeries c;
    c.region = RegionId::parse(code);
    c.variable = Variable::cases();
    c.start_date = spec.start;
    c.values = cases_by_region.at(code);
    out.cases.push_back(std::move(c));

    DailySeries v;
    v.region = c.region;
    v.variable = Variable::vaccination();
    v.start_date = spec.start;
    v.values.resize(static_cast<size_t>(n_days));
    const double midpoint = n_days * 0.6;
    for (int t = 0; t < n_days; ++t) {
      const double ramp = 70.0 / (1.0 + std::exp(-(t - midpoint) / 45.0));
      v.values[static_cast<size_t>(t)] =
          std::clamp(ramp + 0.2 * gauss(rng), 0.0, 100.0);
    }
    out.vaccination.push_back(std::move(v));
  }

  return out;
}

void write_csvs(const SynthData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_series_csv(dir / "hosp.csv", data.hospitalizations, SeriesLayout::WideByRegion);
  write_series_csv(dir / "cases.csv", data.cases, SeriesLayout::WideByRegion);
  write_series_csv(dir / "vacc.csv", data.vaccination, SeriesLayout::WideByRegion);

  // Queries share one wide file keyed by term name.
  if (data.queries.empty()) throw ValidationError("no query series to write");
  const Date first = data.queries.front().start_date;
  const Date last = data.queries.front().end_date();
  std::vector<std::string> header = {"date"};
  for (const auto& q : data.queries) header.push_back(q.variable.term);
  std::vector<std::vector<std::string>> rows;
  for (Date d = first; d <= last; d += 1) {
    std::vector<std::string> row = {d.to_iso()};
    for (const auto& q : data.queries) row.push_back(format_value(q.at(d)));
    rows.push_back(std::move(row));
  }
  write_csv(dir / "queries.csv", header, rows);
}

}  // namespace argocast::synth
