#pragma once

#include <span>
#include <string>
#include <vector>

#include "argocast/date.hpp"
#include "argocast/region.hpp"

namespace argocast {

enum class VariableKind { Hospitalizations, Cases, VaccinationPct, QueryTerm };

// Which series a region carries. Query terms carry the term text.
struct Variable {
  VariableKind kind = VariableKind::Hospitalizations;
  std::string term;  // nonempty iff kind == QueryTerm

  static Variable hospitalizations() { return {VariableKind::Hospitalizations, ""}; }
  static Variable cases() { return {VariableKind::Cases, ""}; }
  static Variable vaccination() { return {VariableKind::VaccinationPct, ""}; }
  static Variable query(std::string term) { return {VariableKind::QueryTerm, std::move(term)}; }

  // Stable string key, e.g. "hosp", "cases", "vacc", "query:<term>".
  std::string key() const;

  bool operator==(const Variable&) const = default;
  auto operator<=>(const Variable&) const = default;
};

// One real-valued daily time series for one region and one variable.
// values[i] belongs to date start_date + i; the calendar has no gaps.
struct DailySeries {
  RegionId region;
  Variable variable;
  Date start_date;
  std::vector<double> values;

  Date end_date() const { return start_date + (static_cast<int>(values.size()) - 1); }
  bool covers(Date first, Date last) const {
    return !values.empty() && start_date <= first && end_date() >= last;
  }
  bool contains(Date d) const { return !values.empty() && d >= start_date && d <= end_date(); }
  double at(Date d) const;

  // Truncates to [first, last]; throws IncompleteCoverageError if not covered.
  DailySeries window(Date first, Date last) const;

  // Checks the per-variable range invariants (counts >= 0, vaccination in [0, 100]).
  void validate() const;
};

}  // namespace argocast
