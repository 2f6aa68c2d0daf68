#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "factagent/errors.hpp"

namespace factagent {

/// Proleptic Gregorian calendar date; totally ordered value type.
struct CalendarDate {
  int year = 0;
  int month = 0;
  int day = 0;

  friend constexpr auto operator<=>(const CalendarDate&, const CalendarDate&) = default;

  bool ok() const {
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    return std::chrono::year_month_day{std::chrono::year{year},
                                       std::chrono::month{static_cast<unsigned>(month)},
                                       std::chrono::day{static_cast<unsigned>(day)}}
        .ok();
  }

  CalendarDate previous_day() const {
    namespace ch = std::chrono;
    ch::year_month_day ymd{ch::year{year}, ch::month{static_cast<unsigned>(month)},
                           ch::day{static_cast<unsigned>(day)}};
    ch::year_month_day prev{ch::sys_days{ymd} - ch::days{1}};
    return {static_cast<int>(prev.year()), static_cast<int>(static_cast<unsigned>(prev.month())),
            static_cast<int>(static_cast<unsigned>(prev.day()))};
  }

  /// `YYYY-MM-DD`
  std::string to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  /// `MM/DD/YYYY`
  std::string to_us() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d", month, day, year);
    return buf;
  }
};

/// Accepts `MM/DD/YYYY` or `YYYY-MM-DD`. Impossible dates are rejected.
inline CalendarDate parse_publish_date(std::string_view raw) {
  auto read_number = [&](std::size_t& pos) -> int {
    std::size_t start = pos;
    while (pos < raw.size() && std::isdigit(static_cast<unsigned char>(raw[pos]))) ++pos;
    if (pos == start) throw ParseError("expected a digit in date", start);
    int value = 0;
    std::from_chars(raw.data() + start, raw.data() + pos, value);
    return value;
  };

  std::size_t pos = 0;
  const int first = read_number(pos);
  if (pos >= raw.size() || (raw[pos] != '/' && raw[pos] != '-'))
    throw ParseError("expected '/' or '-' date separator", pos);
  const char sep = raw[pos++];
  const int second = read_number(pos);
  if (pos >= raw.size() || raw[pos] != sep)
    throw ParseError(std::string("expected '") + sep + "' date separator", pos);
  ++pos;
  const int third = read_number(pos);
  if (pos != raw.size()) throw ParseError("trailing characters after date", pos);

  const CalendarDate date =
      sep == '/' ? CalendarDate{third, first, second} : CalendarDate{first, second, third};
  if (!date.ok()) throw ParseError("impossible calendar date: " + std::string(raw), 0);
  return date;
}

}  // namespace factagent
