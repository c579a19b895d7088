#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace argocast {

// Calendar date stored as a count of days since 1970-01-01.
// All series indexing and lag arithmetic is plain integer day arithmetic.
class Date {
 public:
  Date() = default;
  explicit Date(int days_since_epoch) : days_(days_since_epoch) {}

  static Date from_ymd(int year, unsigned month, unsigned day);
  // Parses strict ISO-8601 "YYYY-MM-DD"; throws ParseError otherwise.
  static Date parse(std::string_view iso);

  std::string to_iso() const;
  int days() const { return days_; }

  // 0 = Sunday, 1 = Monday, ..., 6 = Saturday.
  int weekday() const;
  bool is_monday() const { return weekday() == 1; }
  Date monday_on_or_after() const;
  Date monday_on_or_before() const;

  Date operator+(int d) const { return Date(days_ + d); }
  Date operator-(int d) const { return Date(days_ - d); }
  int operator-(Date other) const { return days_ - other.days_; }
  Date& operator+=(int d) {
    days_ += d;
    return *this;
  }
  auto operator<=>(const Date&) const = default;

 private:
  int days_ = 0;
};

}  // namespace argocast
