#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coinstats/date.hpp"
#include "coinstats/error.hpp"

namespace coinstats {

using CoinId = std::string;

struct PricePoint {
  Date date;
  double close = 0.0;  // daily close, USD

  friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

// Dated daily closes for one coin. Dates strictly increasing, closes > 0.
struct PriceSeries {
  CoinId coin;
  std::vector<PricePoint> points;

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

struct ReturnPoint {
  Date date;  // date of the later close in the pair
  double ret = 0.0;
};

struct ReturnSeries {
  CoinId coin;
  std::vector<ReturnPoint> points;
};

// Aligned coins x dates matrix of log returns. A cell without an observation
// is empty, never zero: a zero return is a real observation.
struct ReturnPanel {
  std::vector<CoinId> coins;
  std::vector<Date> dates;
  std::vector<std::optional<double>> cells;  // row-major, coins x dates

  size_t rows() const { return coins.size(); }
  size_t cols() const { return dates.size(); }

  std::optional<double>& cell(size_t coin, size_t date) {
    return cells[coin * dates.size() + date];
  }
  const std::optional<double>& cell(size_t coin, size_t date) const {
    return cells[coin * dates.size() + date];
  }

  // Index of a coin id, or -1.
  long coin_index(const CoinId& id) const {
    for (size_t i = 0; i < coins.size(); ++i) {
      if (coins[i] == id) return static_cast<long>(i);
    }
    return -1;
  }
};

enum class AlignPolicy { intersection, union_with_missing };

inline const char* to_string(AlignPolicy p) {
  return p == AlignPolicy::intersection ? "intersection" : "union-with-missing";
}

inline AlignPolicy parse_align_policy(const std::string& s) {
  if (s == "intersection") return AlignPolicy::intersection;
  if (s == "union-with-missing") return AlignPolicy::union_with_missing;
  raise(Errc::invalid_parameter, "unknown align policy '" + s +
                                     "' (expected intersection or "
                                     "union-with-missing)");
}

// Checks series invariants on already-ordered input. Rejects rather than
// repairs: callers that want sorted input sort before validating.
inline PriceSeries validate_prices(CoinId coin,
                                   std::vector<PricePoint> points) {
  if (coin.empty()) {
    raise(Errc::invalid_parameter, "empty coin id");
  }
  if (points.size() < 2) {
    raise(Errc::too_short, "price series for " + coin + " has " +
                               std::to_string(points.size()) +
                               " points, need at least 2");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].close > 0.0) || !std::isfinite(points[i].close)) {
      raise(Errc::non_positive_price,
            "non-positive close for " + coin + " on " +
                points[i].date.to_string());
    }
    if (i > 0) {
      if (points[i].date == points[i - 1].date) {
        raise(Errc::duplicate_date, "duplicate date " +
                                        points[i].date.to_string() + " for " +
                                        coin);
      }
      if (points[i].date < points[i - 1].date) {
        raise(Errc::out_of_order_date, "out-of-order date " +
                                           points[i].date.to_string() +
                                           " for " + coin);
      }
    }
  }
  return PriceSeries{std::move(coin), std::move(points)};
}

// r_k = ln(close_{k+1} / close_k), dated by the later close. One return per
// adjacent pair regardless of calendar gaps; no gap scaling.
inline ReturnSeries log_returns(const PriceSeries& series) {
  if (series.points.size() < 2) {
    raise(Errc::too_short, "price series for " + series.coin +
                               " too short for returns");
  }
  ReturnSeries out;
  out.coin = series.coin;
  out.points.reserve(series.points.size() - 1);
  for (size_t i = 1; i < series.points.size(); ++i) {
    double r = std::log(series.points[i].close / series.points[i - 1].close);
    out.points.push_back(ReturnPoint{series.points[i].date, r});
  }
  return out;
}

// Aligns return series onto a common date axis. `intersection` keeps only
// dates present in every series; `union_with_missing` keeps all dates seen
// anywhere and leaves absent cells empty.
inline ReturnPanel align_returns(const std::vector<ReturnSeries>& series,
                                 AlignPolicy policy) {
  if (series.empty()) {
    raise(Errc::empty_input, "no return series to align");
  }
  {
    std::set<CoinId> seen;
    for (const auto& s : series) {
      if (!seen.insert(s.coin).second) {
        raise(Errc::duplicate_coin, "duplicate coin id " + s.coin);
      }
    }
  }

  std::vector<Date> dates;
  if (policy == AlignPolicy::union_with_missing) {
    std::set<Date> all;
    for (const auto& s : series) {
      for (const auto& p : s.points) all.insert(p.date);
    }
    dates.assign(all.begin(), all.end());
  } else {
    std::map<Date, size_t> counts;
    for (const auto& s : series) {
      for (const auto& p : s.points) counts[p.date] += 1;
    }
    for (const auto& [d, c] : counts) {
      if (c == series.size()) dates.push_back(d);
    }
    if (dates.empty()) {
      raise(Errc::empty_intersection,
            "no date is present in every series");
    }
  }

  ReturnPanel panel;
  panel.coins.reserve(series.size());
  for (const auto& s : series) panel.coins.push_back(s.coin);
  panel.dates = dates;
  panel.cells.assign(series.size() * dates.size(), std::nullopt);

  std::map<Date, size_t> date_index;
  for (size_t t = 0; t < dates.size(); ++t) date_index[dates[t]] = t;
  for (size_t i = 0; i < series.size(); ++i) {
    for (const auto& p : series[i].points) {
      auto it = date_index.find(p.date);
      if (it != date_index.end()) {
        panel.cell(i, it->second) = p.ret;
      }
    }
  }
  return panel;
}

}  // namespace coinstats
