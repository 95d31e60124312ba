#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coinstats/correlation.hpp"
#include "coinstats/error.hpp"
#include "coinstats/snapshot.hpp"

namespace coinstats {

// Log-scale profile of one indicator across coins (heavy-tailed indicators
// are near log-normal, so moments are taken on log10 values).
struct LogHistogram {
  std::string indicator;
  long long included = 0;             // positive values, binned
  long long excluded_nonpositive = 0; // present but <= 0
  std::vector<HistogramBin> bins;     // edges in log10 units
  double log_mean = 0.0;
  double log_stddev = 0.0;    // population estimator
  double log_skewness = 0.0;  // third standardized central moment, population
};

inline LogHistogram log_histogram(std::span<const MarketSnapshot> snapshots,
                                  std::string_view indicator, int bins) {
  if (!is_indicator_name(indicator)) {
    raise(Errc::unknown_indicator,
          "unknown indicator '" + std::string(indicator) + "'");
  }
  if (bins < 1) {
    raise(Errc::invalid_parameter, "bin count must be at least 1");
  }
  LogHistogram out;
  out.indicator = std::string(indicator);
  std::vector<double> logs;
  for (const auto& s : snapshots) {
    const auto& v = indicator_value(s, indicator);
    if (!v) continue;
    if (*v > 0.0) {
      logs.push_back(std::log10(*v));
    } else {
      out.excluded_nonpositive += 1;
    }
  }
  if (logs.empty()) {
    raise(Errc::nothing_to_bin, "no positive values for " + out.indicator);
  }
  out.included = static_cast<long long>(logs.size());

  auto [lo_it, hi_it] = std::minmax_element(logs.begin(), logs.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    // all values identical on the log scale: use a unit-width window so the
    // bins stay contiguous and ascending
    lo -= 0.5;
    hi += 0.5;
  }
  out.bins.resize(static_cast<size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    out.bins[b].lo = lo + (hi - lo) * b / bins;
    out.bins[b].hi = lo + (hi - lo) * (b + 1) / bins;
  }
  for (double v : logs) {
    int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
    idx = std::clamp(idx, 0, bins - 1);
    out.bins[idx].count += 1;
  }

  double n = static_cast<double>(logs.size());
  double mean = 0.0;
  for (double v : logs) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : logs) {
    double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  out.log_mean = mean;
  out.log_stddev = std::sqrt(m2);
  out.log_skewness = m2 > 0.0 ? m3 / (out.log_stddev * m2) : 0.0;
  return out;
}

enum class Transform { raw, log10 };

inline const char* to_string(Transform t) {
  return t == Transform::raw ? "raw" : "log10";
}

inline Transform parse_transform(const std::string& s) {
  if (s == "raw") return Transform::raw;
  if (s == "log10") return Transform::log10;
  raise(Errc::invalid_parameter,
        "unknown transform '" + s + "' (expected raw or log10)");
}

// One indicator-vs-target correlation cell. An uncomputable cell is
// reported as unavailable rather than failing the whole table.
struct CrossCell {
  std::optional<double> r;
  long long n = 0;                   // pairs that entered the coefficient
  long long dropped_nonpositive = 0; // pairs dropped by the log10 transform
  std::optional<Errc> unavailable_reason;
};

struct CrossRow {
  std::string indicator;
  CrossCell vs_price;
  CrossCell vs_market_cap;
};

struct CrossCorrelationTable {
  Transform transform = Transform::raw;
  long long min_overlap = kDefaultMinOverlap;
  std::vector<CrossRow> rows;
};

namespace detail {

inline CrossCell cross_cell(std::span<const MarketSnapshot> snapshots,
                            std::string_view indicator,
                            std::string_view target, Transform transform,
                            long long min_overlap) {
  CrossCell cell;
  std::vector<double> xs, ys;
  for (const auto& s : snapshots) {
    const auto& x = indicator_value(s, indicator);
    const auto& y = indicator_value(s, target);
    if (!x || !y) continue;
    if (transform == Transform::log10) {
      if (*x <= 0.0 || *y <= 0.0) {
        cell.dropped_nonpositive += 1;
        continue;
      }
      xs.push_back(std::log10(*x));
      ys.push_back(std::log10(*y));
    } else {
      xs.push_back(*x);
      ys.push_back(*y);
    }
  }
  cell.n = static_cast<long long>(xs.size());
  try {
    cell.r = pearson(std::span<const double>(xs),
                     std::span<const double>(ys), min_overlap);
  } catch (const Error& e) {
    cell.unavailable_reason = e.code();
  }
  return cell;
}

}  // namespace detail

// Correlates each indicator against price and market cap over the coins
// where both fields are present.
inline CrossCorrelationTable cross_correlation(
    std::span<const MarketSnapshot> snapshots,
    std::span<const std::string> indicators, Transform transform,
    long long min_overlap = kDefaultMinOverlap) {
  detail::check_min_overlap_param(min_overlap);
  if (static_cast<long long>(snapshots.size()) < min_overlap) {
    raise(Errc::insufficient_overlap,
          "only " + std::to_string(snapshots.size()) +
              " snapshots, need " + std::to_string(min_overlap));
  }
  for (const auto& name : indicators) {
    if (!is_indicator_name(name)) {
      raise(Errc::unknown_indicator, "unknown indicator '" + name + "'");
    }
  }
  CrossCorrelationTable table;
  table.transform = transform;
  table.min_overlap = min_overlap;
  for (const auto& name : indicators) {
    CrossRow row;
    row.indicator = name;
    row.vs_price =
        detail::cross_cell(snapshots, name, "price", transform, min_overlap);
    row.vs_market_cap = detail::cross_cell(snapshots, name, "market_cap",
                                           transform, min_overlap);
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Default row set: every indicator except the two targets.
inline std::vector<std::string> default_cross_indicators() {
  return {"volume_24h",     "chain_tx_24h",      "mining_difficulty",
          "reddit_subscribers", "facebook_likes", "twitter_followers"};
}

}  // namespace coinstats
