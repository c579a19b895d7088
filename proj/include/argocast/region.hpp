#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace argocast {

// One of the 52 recognized region codes: "US", the 50 states, and "DC".
// Codes are stored uppercase; parsing is case-insensitive.
class RegionId {
 public:
  RegionId() = default;

  static RegionId parse(std::string_view code);
  static bool is_recognized(std::string_view code);
  // All 52 codes, "US" first, states alphabetical.
  static const std::vector<std::string>& all_codes();
  static const std::vector<std::string>& state_codes();

  const std::string& code() const { return code_; }
  bool is_national() const { return code_ == "US"; }

  bool operator==(const RegionId&) const = default;
  auto operator<=>(const RegionId&) const = default;

 private:
  explicit RegionId(std::string code) : code_(std::move(code)) {}
  std::string code_;
};

}  // namespace argocast
