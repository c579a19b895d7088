#include "argocast/date.hpp"

#include <cctype>
#include <charconv>
#include <chrono>

#include "argocast/errors.hpp"

namespace argocast {

namespace {

std::chrono::sys_days to_sys_days(int days) {
  return std::chrono::sys_days(std::chrono::days(days));
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                  std::chrono::day{day}};
  if (!ymd.ok()) {
    throw ParseError("invalid calendar date: " + std::to_string(year) + "-" +
                     std::to_string(month) + "-" + std::to_string(day));
  }
  return Date(static_cast<int>(std::chrono::sys_days(ymd).time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
  auto fail = [&] { throw ParseError("expected ISO date YYYY-MM-DD, got '" + std::string(iso) + "'"); };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') fail();
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(iso[i]))) fail();
  }
  int y = 0;
  unsigned m = 0, d = 0;
  std::from_chars(iso.data(), iso.data() + 4, y);
  std::from_chars(iso.data() + 5, iso.data() + 7, m);
  std::from_chars(iso.data() + 8, iso.data() + 10, d);
  return from_ymd(y, m, d);
}

std::string Date::to_iso() const {
  std::chrono::year_month_day ymd{to_sys_days(days_)};
  char buf[11];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return std::string(buf);
}

int Date::weekday() const {
  std::chrono::weekday wd{to_sys_days(days_)};
  return static_cast<int>(wd.c_encoding());
}

Date Date::monday_on_or_after() const {
  int wd = weekday();
  int shift = (8 - wd) % 7;
  return *this + shift;
}

Date Date::monday_on_or_before() const {
  int wd = weekday();
  int shift = (wd + 6) % 7;
  return *this - shift;
}

}  // namespace argocast
