#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "argocast/region.hpp"

namespace argocast {

// Land-border neighbor map over the 51 states (incl. DC). "US", "AK" and "HI"
// always have empty neighbor sets.
class AdjacencyMap {
 public:
  AdjacencyMap() = default;

  // Reads a CSV of (state, neighbor) pairs, adds both directions, validates.
  static AdjacencyMap load_csv(const std::filesystem::path& path);
  static AdjacencyMap from_pairs(const std::vector<std::pair<RegionId, RegionId>>& edges);

  const std::set<RegionId>& neighbors(const RegionId& r) const;
  size_t edge_count() const;

  // Symmetric, no self-loops, US/AK/HI isolated, DC touching exactly {MD, VA}.
  void validate() const;

 private:
  std::map<RegionId, std::set<RegionId>> neighbors_;
};

// The stored neighbor set for r; empty for US, AK, HI.
const std::set<RegionId>& neighbors_of(const AdjacencyMap& adjacency, const RegionId& r);

}  // namespace argocast
