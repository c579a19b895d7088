#include "argocast/bundle.hpp"

#include <algorithm>

#include "argocast/errors.hpp"

namespace argocast {

bool DataBundle::has(const RegionId& r, const Variable& v) const {
  return series_.count({r, v.key()}) > 0;
}

const DailySeries& DataBundle::series(const RegionId& r, const Variable& v) const {
  auto it = series_.find({r, v.key()});
  if (it == series_.end()) {
    throw ValidationError("bundle has no series " + r.code() + "/" + v.key());
  }
  return it->second;
}

double DataBundle::value(const RegionId& r, const Variable& v, Date d) const {
  return series(r, v).at(d);
}

std::vector<RegionId> DataBundle::regions() const {
  std::vector<RegionId> out;
  for (const auto& [key, s] : series_) {
    if (key.second == "hosp") out.push_back(key.first);
  }
  // "US" first, then alphabetical; map order already gives DC..WY sorted.
  auto us = std::find_if(out.begin(), out.end(), [](const RegionId& r) { return r.is_national(); });
  if (us != out.end()) std::rotate(out.begin(), us, us + 1);
  return out;
}

std::vector<std::string> DataBundle::query_terms() const {
  std::vector<std::string> out;
  for (const auto& [key, s] : series_) {
    if (s.variable.kind == VariableKind::QueryTerm) out.push_back(s.variable.term);
  }
  return out;
}

DataBundle DataBundle::truncated(Date new_end) const {
  std::vector<DailySeries> all;
  all.reserve(series_.size());
  for (const auto& [key, s] : series_) all.push_back(s);
  return align_bundle(all, adjacency_, start_, std::min(end_, new_end));
}

DataBundle align_bundle(const std::vector<DailySeries>& series, const AdjacencyMap& adjacency,
                        Date start, Date end) {
  if (end < start) throw ValidationError("align_bundle: end precedes start");
  DataBundle bundle;
  bundle.start_ = start;
  bundle.end_ = end;
  bundle.adjacency_ = adjacency;

  for (const auto& s : series) {
    if (s.values.empty()) {
      throw IncompleteCoverageError("empty series " + s.region.code() + "/" + s.variable.key());
    }
    if (!s.covers(start, end)) {
      Date missing = (s.start_date > start) ? start : end;
      throw IncompleteCoverageError("series " + s.region.code() + "/" + s.variable.key() +
                                    " does not cover " + missing.to_iso() + " (covers " +
                                    s.start_date.to_iso() + ".." + s.end_date().to_iso() + ")");
    }
    auto key = std::make_pair(s.region, s.variable.key());
    if (bundle.series_.count(key)) {
      throw ValidationError("duplicate series " + s.region.code() + "/" + s.variable.key());
    }
    bundle.series_.emplace(std::move(key), s.window(start, end));
  }

  std::set<RegionId> present;
  for (const auto& [key, s] : bundle.series_) {
    present.insert(key.first);
    if (s.variable.kind == VariableKind::QueryTerm && !key.first.is_national()) {
      throw ValidationError("query-term series must be national, got " + key.first.code());
    }
  }
  for (const auto& r : present) {
    if (!bundle.has(r, Variable::hospitalizations())) {
      throw ValidationError("region " + r.code() + " lacks a hospitalizations series");
    }
  }
  return bundle;
}

}  // namespace argocast
