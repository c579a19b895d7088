#include "argocast/adjacency.hpp"

#include "argocast/csv.hpp"
#include "argocast/errors.hpp"

namespace argocast {

AdjacencyMap AdjacencyMap::load_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() != 2) {
    throw CsvError("adjacency file needs (state, neighbor) columns: " + path.string());
  }
  std::vector<std::pair<RegionId, RegionId>> edges;
  edges.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    edges.emplace_back(RegionId::parse(row[0]), RegionId::parse(row[1]));
  }
  return from_pairs(edges);
}

AdjacencyMap AdjacencyMap::from_pairs(const std::vector<std::pair<RegionId, RegionId>>& edges) {
  AdjacencyMap m;
  for (const auto& [a, b] : edges) {
    m.neighbors_[a].insert(b);
    m.neighbors_[b].insert(a);
  }
  m.validate();
  return m;
}

const std::set<RegionId>& AdjacencyMap::neighbors(const RegionId& r) const {
  static const std::set<RegionId> empty;
  auto it = neighbors_.find(r);
  return it == neighbors_.end() ? empty : it->second;
}

size_t AdjacencyMap::edge_count() const {
  size_t degree_sum = 0;
  for (const auto& [r, ns] : neighbors_) degree_sum += ns.size();
  return degree_sum / 2;
}

void AdjacencyMap::validate() const {
  for (const auto& [r, ns] : neighbors_) {
    if (ns.count(r)) throw ValidationError("adjacency self-loop at " + r.code());
    for (const auto& n : ns) {
      if (!neighbors(n).count(r)) {
        throw ValidationError("adjacency not symmetric: " + r.code() + " -> " + n.code());
      }
    }
  }
  for (const char* iso : {"US", "AK", "HI"}) {
    if (!neighbors(RegionId::parse(iso)).empty()) {
      throw ValidationError(std::string(iso) + " must have no neighbors");
    }
  }
  const auto& dc = neighbors(RegionId::parse("DC"));
  if (!dc.empty()) {
    const std::set<RegionId> expect = {RegionId::parse("MD"), RegionId::parse("VA")};
    if (dc != expect) throw ValidationError("DC neighbors must be {MD, VA}");
  }
}

const std::set<RegionId>& neighbors_of(const AdjacencyMap& adjacency, const RegionId& r) {
  return adjacency.neighbors(r);
}

}  // namespace argocast
