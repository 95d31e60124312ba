#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "coinstats/error.hpp"
#include "coinstats/snapshot.hpp"

namespace coinstats {

// DOJ-style concentration classes on the x10000 HHI scale.
enum class HhiClass { competitive, moderately_concentrated, highly_concentrated };

inline const char* to_string(HhiClass c) {
  switch (c) {
    case HhiClass::competitive: return "competitive";
    case HhiClass::moderately_concentrated: return "moderately-concentrated";
    case HhiClass::highly_concentrated: return "highly-concentrated";
  }
  return "?";
}

struct HhiResult {
  double raw = 0.0;     // sum(x^2) / sum(x)^2, in [1/n, 1]
  double scaled = 0.0;  // raw * 10000
};

namespace detail {

inline void check_shares(std::span<const double> values, const char* op) {
  if (values.empty()) {
    raise(Errc::all_zero, std::string(op) + ": empty input");
  }
  bool any_positive = false;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      raise(Errc::negative_value,
            std::string(op) + ": negative or non-finite value");
    }
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) {
    raise(Errc::all_zero, std::string(op) + ": all values are zero");
  }
}

}  // namespace detail

// Herfindahl-Hirschman index of the share distribution.
inline HhiResult hhi(std::span<const double> values) {
  detail::check_shares(values, "hhi");
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  HhiResult out;
  out.raw = sum_sq / (sum * sum);
  out.scaled = 10000.0 * out.raw;
  return out;
}

// Gini coefficient via the rank-weighted formula on an ascending sort:
//   G = 2 * sum(i * x_i) / (N * sum(x)) - (N + 1) / N,  i in [1, N].
// The two extremes take their closed forms so the bounds are exact.
inline double gini(std::span<const double> values) {
  detail::check_shares(values, "gini");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  size_t n = sorted.size();
  if (sorted.front() == sorted.back()) return 0.0;  // all equal
  if (n >= 2 && sorted[n - 2] == 0.0) {             // single holder
    return static_cast<double>(n - 1) / static_cast<double>(n);
  }
  double weighted = 0.0, total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    weighted += static_cast<double>(i + 1) * sorted[i];
    total += sorted[i];
  }
  double dn = static_cast<double>(n);
  return 2.0 * weighted / (dn * total) - (dn + 1.0) / dn;
}

// Thresholds 1500/2500 on the scaled index; both boundaries count as
// moderately concentrated.
inline HhiClass classify_hhi(double hhi_scaled) {
  if (hhi_scaled < 1500.0) return HhiClass::competitive;
  if (hhi_scaled <= 2500.0) return HhiClass::moderately_concentrated;
  return HhiClass::highly_concentrated;
}

inline constexpr double kGiniDisparityThreshold = 0.5;

struct ConcentrationResult {
  std::string indicator;
  long long n = 0;        // values that entered the indices
  long long skipped = 0;  // coins missing this indicator
  double hhi_raw = 0.0;
  double hhi_scaled = 0.0;
  double gini = 0.0;
  HhiClass hhi_class = HhiClass::competitive;
  bool disparity = false;  // gini >= 0.5
};

// Builds a ConcentrationResult from one indicator's collected values.
inline ConcentrationResult concentration_of(std::string indicator,
                                            std::span<const double> values,
                                            long long skipped) {
  ConcentrationResult r;
  r.indicator = std::move(indicator);
  r.n = static_cast<long long>(values.size());
  r.skipped = skipped;
  try {
    HhiResult h = hhi(values);
    r.hhi_raw = h.raw;
    r.hhi_scaled = h.scaled;
    r.gini = gini(values);
  } catch (const Error& e) {
    raise(e.code(), r.indicator + ": " + e.what());
  }
  r.hhi_class = classify_hhi(r.hhi_scaled);
  r.disparity = r.gini >= kGiniDisparityThreshold;
  return r;
}

// One ConcentrationResult per requested indicator, collected across all
// snapshots. Coins missing an indicator are skipped and counted.
inline std::vector<ConcentrationResult> concentration_report(
    std::span<const MarketSnapshot> snapshots,
    std::span<const std::string> indicators) {
  if (snapshots.empty()) {
    raise(Errc::empty_input, "no snapshots");
  }
  for (const auto& name : indicators) {
    if (!is_indicator_name(name)) {
      raise(Errc::unknown_indicator, "unknown indicator '" + name + "'");
    }
  }
  std::vector<ConcentrationResult> out;
  out.reserve(indicators.size());
  for (const auto& name : indicators) {
    std::vector<double> values;
    long long skipped = 0;
    for (const auto& s : snapshots) {
      const auto& v = indicator_value(s, name);
      if (v) {
        values.push_back(*v);
      } else {
        ++skipped;
      }
    }
    out.push_back(concentration_of(name, values, skipped));
  }
  return out;
}

}  // namespace coinstats
