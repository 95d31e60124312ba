#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "coinstats/error.hpp"

namespace coinstats {

// One whole UTC calendar day. Inputs must be exactly YYYY-MM-DD; anything
// carrying a time component is rejected rather than truncated.
class Date {
 public:
  Date() : days_(0) {}
  explicit Date(std::chrono::sys_days d) : days_(d.time_since_epoch().count()) {}

  static Date from_ymd(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year},
                                    std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
      raise(Errc::bad_date, "invalid calendar day " + std::to_string(year) +
                                "-" + std::to_string(month) + "-" +
                                std::to_string(day));
    }
    return Date(std::chrono::sys_days{ymd});
  }

  static Date parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
      raise(Errc::bad_date,
            "expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    auto digits = [&](size_t pos, size_t len) -> int {
      int v = 0;
      for (size_t i = pos; i < pos + len; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') {
          raise(Errc::bad_date,
                "expected YYYY-MM-DD, got '" + std::string(text) + "'");
        }
        v = v * 10 + (c - '0');
      }
      return v;
    };
    return from_ymd(digits(0, 4), static_cast<unsigned>(digits(5, 2)),
                    static_cast<unsigned>(digits(8, 2)));
  }

  std::string to_string() const {
    auto ymd = std::chrono::year_month_day{sys_days()};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
  }

  std::chrono::sys_days sys_days() const {
    return std::chrono::sys_days{std::chrono::days{days_}};
  }

  // Days since the Unix epoch; handy as a dense key.
  long serial() const { return days_; }

  Date plus_days(long n) const {
    return Date(sys_days() + std::chrono::days{n});
  }

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  long days_;
};

}  // namespace coinstats
