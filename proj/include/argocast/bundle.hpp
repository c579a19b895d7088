#pragma once

#include <map>
#include <string>
#include <vector>

#include "argocast/adjacency.hpp"
#include "argocast/series.hpp"

namespace argocast {

// Calendar-aligned panel of all series plus the state adjacency map.
// Immutable after construction; safe to share across concurrent readers.
class DataBundle {
 public:
  Date start() const { return start_; }
  Date end() const { return end_; }

  bool has(const RegionId& r, const Variable& v) const;
  const DailySeries& series(const RegionId& r, const Variable& v) const;
  double value(const RegionId& r, const Variable& v, Date d) const;

  // Regions carrying a hospitalizations series, "US" first then alphabetical.
  std::vector<RegionId> regions() const;
  std::vector<std::string> query_terms() const;
  const AdjacencyMap& adjacency() const { return adjacency_; }

  // Same bundle cut to [start, new_end].
  DataBundle truncated(Date new_end) const;

  friend DataBundle align_bundle(const std::vector<DailySeries>& series,
                                 const AdjacencyMap& adjacency, Date start, Date end);

 private:
  std::map<std::pair<RegionId, std::string>, DailySeries> series_;
  AdjacencyMap adjacency_;
  Date start_;
  Date end_;
};

// Truncates every series to [start, end] and checks the bundle invariants:
// full coverage, hospitalizations present per region, query terms national-only.
DataBundle align_bundle(const std::vector<DailySeries>& series, const AdjacencyMap& adjacency,
                        Date start, Date end);

}  // namespace argocast
