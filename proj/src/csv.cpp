#include "argocast/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include "argocast/errors.hpp"

namespace argocast {

namespace {

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// RFC-4180 style line split: commas, optional double quotes, "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line, size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw CsvError("unterminated quote on line " + std::to_string(line_no));
  out.push_back(trim(cur));
  return out;
}

double parse_value(const std::string& cell, const std::string& context) {
  const std::string t = trim(cell);
  if (t.empty()) throw CsvError("empty value " + context);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw CsvError("unparseable value '" + t + "' " + context);
  }
  return v;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

// Assembles (date, value) observations for one key into a contiguous DailySeries.
DailySeries build_series(const RegionId& region, const Variable& variable,
                         std::vector<std::pair<Date, double>> obs, const std::string& where) {
  std::sort(obs.begin(), obs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < obs.size(); ++i) {
    if (obs[i].first == obs[i - 1].first) {
      throw CsvError("duplicate row for (" + obs[i].first.to_iso() + ", " + region.code() + ") " +
                     where);
    }
    if (obs[i].first - obs[i - 1].first != 1) {
      Date gap = obs[i - 1].first + 1;
      throw NonContiguousError("non-contiguous dates in " + where + ": missing " + gap.to_iso(),
                               gap.to_iso());
    }
  }
  DailySeries s;
  s.region = region;
  s.variable = variable;
  s.start_date = obs.empty() ? Date() : obs.front().first;
  s.values.reserve(obs.size());
  for (auto& [d, v] : obs) s.values.push_back(v);
  s.validate();
  return s;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path.string());
  CsvTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line, line_no);
    if (line_no == 1) {
      table.header = std::move(cells);
    } else {
      if (cells.size() != table.header.size()) {
        throw CsvError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields, got " +
                       std::to_string(cells.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) throw CsvError("empty file: " + path.string());
  return table;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path.string());
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << quote_if_needed(header[i]);
  }
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << quote_if_needed(row[i]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::string format_value(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

std::vector<DailySeries> load_series(const std::filesystem::path& path, VariableKind kind,
                                     SeriesLayout layout) {
  if (kind == VariableKind::QueryTerm) {
    throw ValidationError("use load_query_series for query-term files");
  }
  const CsvTable table = read_csv(path);
  const std::string where = "in " + path.string();
  const Variable variable{kind, ""};
  std::map<RegionId, std::vector<std::pair<Date, double>>> by_region;

  if (layout == SeriesLayout::LongFormat) {
    if (table.header.size() != 3) {
      throw CsvError("long format needs (date, region, value) columns " + where);
    }
    for (const auto& row : table.rows) {
      Date d = Date::parse(row[0]);
      RegionId r = RegionId::parse(row[1]);
      double v = parse_value(row[2], "for (" + row[0] + ", " + row[1] + ") " + where);
      by_region[r].emplace_back(d, v);
    }
  } else {
    if (table.header.size() < 2) {
      throw CsvError("wide format needs (date, region...) columns " + where);
    }
    std::vector<RegionId> regions;
    regions.reserve(table.header.size() - 1);
    for (size_t c = 1; c < table.header.size(); ++c) {
      regions.push_back(RegionId::parse(table.header[c]));
    }
    for (const auto& row : table.rows) {
      Date d = Date::parse(row[0]);
      for (size_t c = 1; c < row.size(); ++c) {
        double v = parse_value(row[c], "for (" + row[0] + ", " + regions[c - 1].code() + ") " + where);
        by_region[regions[c - 1]].emplace_back(d, v);
      }
    }
  }

  std::vector<DailySeries> out;
  out.reserve(by_region.size());
  for (auto& [region, obs] : by_region) {
    out.push_back(build_series(region, variable, std::move(obs), where));
  }
  return out;
}

std::vector<DailySeries> load_query_series(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::string where = "in " + path.string();
  if (table.header.size() < 2) throw CsvError("query file needs (date, term...) columns " + where);
  const RegionId us = RegionId::parse("US");

  std::vector<std::string> terms(table.header.begin() + 1, table.header.end());
  {
    std::set<std::string> seen;
    for (const auto& t : terms) {
      if (t.empty()) throw CsvError("empty term name in header " + where);
      if (!seen.insert(t).second) throw CsvError("duplicate term '" + t + "' " + where);
    }
  }

  std::vector<std::vector<std::pair<Date, double>>> obs(terms.size());
  for (const auto& row : table.rows) {
    Date d = Date::parse(row[0]);
    for (size_t c = 1; c < row.size(); ++c) {
      double v = parse_value(row[c], "for (" + row[0] + ", " + terms[c - 1] + ") " + where);
      obs[c - 1].emplace_back(d, v);
    }
  }

  std::vector<DailySeries> out;
  out.reserve(terms.size());
  for (size_t k = 0; k < terms.size(); ++k) {
    out.push_back(build_series(us, Variable::query(terms[k]), std::move(obs[k]), where));
  }
  return out;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<DailySeries>& series,
                      SeriesLayout layout) {
  std::vector<std::vector<std::string>> rows;
  if (layout == SeriesLayout::LongFormat) {
    std::vector<const DailySeries*> sorted;
    for (const auto& s : series) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const DailySeries* a, const DailySeries* b) { return a->region < b->region; });
    // Date-major, region-minor ordering.
    Date first = sorted.empty() ? Date() : sorted.front()->start_date;
    Date last = sorted.empty() ? Date() : sorted.front()->end_date();
    for (const auto* s : sorted) {
      first = std::min(first, s->start_date);
      last = std::max(last, s->end_date());
    }
    for (Date d = first; d <= last; d += 1) {
      for (const auto* s : sorted) {
        if (!s->contains(d)) continue;
        rows.push_back({d.to_iso(), s->region.code(), format_value(s->at(d))});
      }
    }
    write_csv(path, {"date", "region", "value"}, rows);
  } else {
    if (series.empty()) throw ValidationError("nothing to serialize");
    std::vector<const DailySeries*> sorted;
    for (const auto& s : series) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const DailySeries* a, const DailySeries* b) { return a->region < b->region; });
    const Date first = sorted.front()->start_date;
    const Date last = sorted.front()->end_date();
    for (const auto* s : sorted) {
      if (s->start_date != first || s->end_date() != last) {
        throw ValidationError("wide serialization requires equal date ranges");
      }
    }
    std::vector<std::string> header = {"date"};
    for (const auto* s : sorted) header.push_back(s->region.code());
    for (Date d = first; d <= last; d += 1) {
      std::vector<std::string> row = {d.to_iso()};
      for (const auto* s : sorted) row.push_back(format_value(s->at(d)));
      rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
  }
}

}  // namespace argocast
