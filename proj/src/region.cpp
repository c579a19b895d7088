#include "argocast/region.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "argocast/errors.hpp"

namespace argocast {

namespace {

constexpr std::array<const char*, 51> kStateCodes = {
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "IA",
    "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS",
    "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA",
    "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY"};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

const std::vector<std::string>& RegionId::state_codes() {
  static const std::vector<std::string> codes(kStateCodes.begin(), kStateCodes.end());
  return codes;
}

const std::vector<std::string>& RegionId::all_codes() {
  static const std::vector<std::string> codes = [] {
    std::vector<std::string> v;
    v.reserve(52);
    v.emplace_back("US");
    v.insert(v.end(), kStateCodes.begin(), kStateCodes.end());
    return v;
  }();
  return codes;
}

bool RegionId::is_recognized(std::string_view code) {
  const std::string u = upper(code);
  const auto& all = all_codes();
  return std::find(all.begin(), all.end(), u) != all.end();
}

RegionId RegionId::parse(std::string_view code) {
  std::string u = upper(code);
  if (!is_recognized(u)) {
    throw UnknownRegionError("unknown region code '" + std::string(code) + "'");
  }
  return RegionId(std::move(u));
}

}  // namespace argocast
