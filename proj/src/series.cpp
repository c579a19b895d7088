#include "argocast/series.hpp"

#include <cmath>

#include "argocast/errors.hpp"

namespace argocast {

std::string Variable::key() const {
  switch (kind) {
    case VariableKind::Hospitalizations:
      return "hosp";
    case VariableKind::Cases:
      return "cases";
    case VariableKind::VaccinationPct:
      return "vacc";
    case VariableKind::QueryTerm:
      return "query:" + term;
  }
  return "?";
}

double DailySeries::at(Date d) const {
  if (!contains(d)) {
    throw InsufficientHistoryError("series " + region.code() + "/" + variable.key() +
                                   " has no value for " + d.to_iso() + " (covers " +
                                   start_date.to_iso() + ".." + end_date().to_iso() + ")");
  }
  return values[static_cast<size_t>(d - start_date)];
}

DailySeries DailySeries::window(Date first, Date last) const {
  if (last < first) throw ValidationError("series window: last precedes first");
  if (!covers(first, last)) {
    Date missing = (start_date > first) ? first : last;
    throw IncompleteCoverageError("series " + region.code() + "/" + variable.key() +
                                  " does not cover " + missing.to_iso());
  }
  DailySeries out;
  out.region = region;
  out.variable = variable;
  out.start_date = first;
  auto begin = values.begin() + (first - start_date);
  out.values.assign(begin, begin + (last - first + 1));
  return out;
}

void DailySeries::validate() const {
  for (size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const std::string where =
        region.code() + "/" + variable.key() + " at " + (start_date + static_cast<int>(i)).to_iso();
    if (!std::isfinite(v)) throw ValidationError("non-finite value in " + where);
    switch (variable.kind) {
      case VariableKind::Hospitalizations:
      case VariableKind::Cases:
      case VariableKind::QueryTerm:
        if (v < 0.0) throw ValidationError("negative value in " + where);
        break;
      case VariableKind::VaccinationPct:
        if (v < 0.0 || v > 100.0) throw ValidationError("vaccination % out of [0,100] in " + where);
        break;
    }
  }
}

}  // namespace argocast
