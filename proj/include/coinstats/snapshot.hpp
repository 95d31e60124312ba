#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "coinstats/date.hpp"
#include "coinstats/error.hpp"
#include "coinstats/timeseries.hpp"

namespace coinstats {

// One coin's point-in-time market, social, and on-chain indicators.
// Absent fields are absent, never zero.
struct MarketSnapshot {
  CoinId coin;
  Date as_of;
  std::optional<double> market_cap;           // USD, >= 0
  std::optional<double> price;                // USD, > 0
  std::optional<double> volume_24h;           // USD, >= 0
  std::optional<double> reddit_subscribers;   // count
  std::optional<double> facebook_likes;       // count
  std::optional<double> twitter_followers;    // count
  std::optional<double> chain_tx_24h;         // count
  std::optional<double> mining_difficulty;    // dimensionless

  friend bool operator==(const MarketSnapshot&, const MarketSnapshot&) = default;
};

inline constexpr std::array<std::string_view, 8> kIndicatorNames = {
    "market_cap",      "price",
    "volume_24h",      "reddit_subscribers",
    "facebook_likes",  "twitter_followers",
    "chain_tx_24h",    "mining_difficulty",
};

inline bool is_indicator_name(std::string_view name) {
  for (auto n : kIndicatorNames) {
    if (n == name) return true;
  }
  return false;
}

inline const std::optional<double>& indicator_value(const MarketSnapshot& s,
                                                    std::string_view name) {
  if (name == "market_cap") return s.market_cap;
  if (name == "price") return s.price;
  if (name == "volume_24h") return s.volume_24h;
  if (name == "reddit_subscribers") return s.reddit_subscribers;
  if (name == "facebook_likes") return s.facebook_likes;
  if (name == "twitter_followers") return s.twitter_followers;
  if (name == "chain_tx_24h") return s.chain_tx_24h;
  if (name == "mining_difficulty") return s.mining_difficulty;
  raise(Errc::unknown_indicator, "unknown indicator '" + std::string(name) + "'");
}

inline std::optional<double>& indicator_value(MarketSnapshot& s,
                                              std::string_view name) {
  return const_cast<std::optional<double>&>(
      indicator_value(static_cast<const MarketSnapshot&>(s), name));
}

// At least one indicator present; all present values finite and within
// their sign constraints (price strictly positive, the rest non-negative).
inline void validate_snapshot(const MarketSnapshot& s) {
  if (s.coin.empty()) {
    raise(Errc::invalid_parameter, "empty coin id in snapshot");
  }
  bool any = false;
  for (auto name : kIndicatorNames) {
    const auto& v = indicator_value(s, name);
    if (!v) continue;
    any = true;
    if (!std::isfinite(*v)) {
      raise(Errc::negative_value, s.coin + ": non-finite " + std::string(name));
    }
    if (name == "price") {
      if (!(*v > 0.0)) {
        raise(Errc::non_positive_price, s.coin + ": price must be positive");
      }
    } else if (*v < 0.0) {
      raise(Errc::negative_value,
            s.coin + ": " + std::string(name) + " must be non-negative");
    }
  }
  if (!any) {
    raise(Errc::empty_input, s.coin + ": snapshot carries no indicator");
  }
}

}  // namespace coinstats
