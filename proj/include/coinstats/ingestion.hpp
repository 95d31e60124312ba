#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coinstats/csv.hpp"
#include "coinstats/date.hpp"
#include "coinstats/error.hpp"
#include "coinstats/numfmt.hpp"
#include "coinstats/snapshot.hpp"
#include "coinstats/timeseries.hpp"

namespace coinstats {

inline constexpr const char* kPriceCsvHeader = "date,coin_id,close_usd";
inline constexpr const char* kSnapshotCsvHeader =
    "coin_id,as_of,market_cap_usd,price_usd,volume_24h_usd,"
    "reddit_subscribers,facebook_likes,twitter_followers,chain_tx_24h,"
    "mining_difficulty";

// A row or coin that could not be loaded. Nothing is dropped silently:
// every rejected row is named here with its line number.
struct LoadWarning {
  long line = 0;  // 0 when the issue is series-level, not row-level
  CoinId coin;
  Errc code = Errc::malformed_row;
  std::string message;
};

struct PriceLoadResult {
  std::vector<PriceSeries> series;  // in first-seen coin order
  std::vector<LoadWarning> warnings;
};

struct SnapshotLoadResult {
  std::vector<MarketSnapshot> snapshots;  // in file order
  std::vector<LoadWarning> warnings;
};

struct Provenance {
  std::string source;
  std::string retrieved_at;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Dataset {
  std::map<CoinId, PriceSeries> prices;
  std::map<CoinId, MarketSnapshot> snapshot;
  Provenance provenance;
};

// --- price CSV ------------------------------------------------------------

// Schema: date,coin_id,close_usd with ISO-8601 dates. Rows are grouped by
// coin and sorted by date before validation. A coin with any bad row is
// dropped whole and each offending line is reported; valid coins still load.
inline PriceLoadResult load_prices(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty() || lines[0] != kPriceCsvHeader) {
    raise(Errc::malformed_row,
          path + ": expected header '" + std::string(kPriceCsvHeader) + "'");
  }

  struct Row {
    long line;
    Date date;
    double close;
  };
  std::vector<CoinId> order;
  std::map<CoinId, std::vector<Row>> rows;
  std::map<CoinId, bool> tainted;
  PriceLoadResult out;

  for (size_t li = 1; li < lines.size(); ++li) {
    long line_no = static_cast<long>(li) + 1;
    if (lines[li].empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(lines[li], line_no);
    } catch (const Error& e) {
      out.warnings.push_back({line_no, "", e.code(), e.what()});
      continue;
    }
    if (fields.size() != 3) {
      out.warnings.push_back({line_no, "", Errc::malformed_row,
                              "expected 3 fields, got " +
                                  std::to_string(fields.size())});
      continue;
    }
    const CoinId& coin = fields[1];
    if (coin.empty()) {
      out.warnings.push_back(
          {line_no, "", Errc::malformed_row, "empty coin_id"});
      continue;
    }
    if (rows.find(coin) == rows.end()) order.push_back(coin);
    try {
      Date d = Date::parse(fields[0]);
      double close = parse_number_strict(fields[2], "close_usd");
      if (!(close > 0.0)) {
        raise(Errc::non_positive_price,
              "close_usd must be positive, got " + fields[2]);
      }
      rows[coin].push_back(Row{line_no, d, close});
    } catch (const Error& e) {
      out.warnings.push_back({line_no, coin, e.code(), e.what()});
      tainted[coin] = true;
      rows[coin];  // keep the coin known even if every row is bad
    }
  }

  for (const auto& coin : order) {
    if (tainted[coin]) {
      out.warnings.push_back({0, coin, Errc::malformed_row,
                              "coin dropped: has unusable rows"});
      continue;
    }
    auto& rs = rows[coin];
    std::stable_sort(rs.begin(), rs.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    std::vector<PricePoint> points;
    points.reserve(rs.size());
    for (const auto& r : rs) points.push_back({r.date, r.close});
    try {
      out.series.push_back(validate_prices(coin, std::move(points)));
    } catch (const Error& e) {
      out.warnings.push_back({0, coin, e.code(), e.what()});
    }
  }
  return out;
}

// Canonical form: coins in lexicographic order, dates ascending, closes in
// shortest-round-trip decimal. save(load(f)) is byte-identical for files
// already in this form.
inline std::string prices_to_csv(std::span<const PriceSeries> series) {
  std::vector<const PriceSeries*> sorted;
  sorted.reserve(series.size());
  for (const auto& s : series) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const PriceSeries* a, const PriceSeries* b) {
              return a->coin < b->coin;
            });
  std::string body = kPriceCsvHeader;
  body.push_back('\n');
  for (const PriceSeries* s : sorted) {
    for (const auto& p : s->points) {
      body += join_csv({p.date.to_string(), s->coin, fmt_shortest(p.close)});
      body.push_back('\n');
    }
  }
  return body;
}

inline void save_prices(const std::string& path,
                        std::span<const PriceSeries> series) {
  write_text_file(path, prices_to_csv(series));
}

// --- snapshot CSV ----------------------------------------------------------

// Empty cells mean absent, never zero. Duplicate coin ids are an error.
inline SnapshotLoadResult load_snapshot(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty() || lines[0] != kSnapshotCsvHeader) {
    raise(Errc::malformed_row, path + ": expected header '" +
                                   std::string(kSnapshotCsvHeader) + "'");
  }
  SnapshotLoadResult out;
  std::map<CoinId, long> seen;
  for (size_t li = 1; li < lines.size(); ++li) {
    long line_no = static_cast<long>(li) + 1;
    if (lines[li].empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(lines[li], line_no);
    } catch (const Error& e) {
      out.warnings.push_back({line_no, "", e.code(), e.what()});
      continue;
    }
    if (fields.size() != 10) {
      out.warnings.push_back({line_no, "", Errc::malformed_row,
                              "expected 10 fields, got " +
                                  std::to_string(fields.size())});
      continue;
    }
    const CoinId& coin = fields[0];
    if (coin.empty()) {
      out.warnings.push_back(
          {line_no, "", Errc::malformed_row, "empty coin_id"});
      continue;
    }
    auto it = seen.find(coin);
    if (it != seen.end()) {
      raise(Errc::duplicate_coin, path + ": duplicate coin id '" + coin +
                                      "' at line " + std::to_string(line_no) +
                                      " (first at line " +
                                      std::to_string(it->second) + ")");
    }
    seen[coin] = line_no;
    try {
      MarketSnapshot s;
      s.coin = coin;
      s.as_of = Date::parse(fields[1]);
      const char* names[8] = {"market_cap_usd",     "price_usd",
                              "volume_24h_usd",     "reddit_subscribers",
                              "facebook_likes",     "twitter_followers",
                              "chain_tx_24h",       "mining_difficulty"};
      std::optional<double>* slots[8] = {
          &s.market_cap,        &s.price,          &s.volume_24h,
          &s.reddit_subscribers, &s.facebook_likes, &s.twitter_followers,
          &s.chain_tx_24h,      &s.mining_difficulty};
      for (int f = 0; f < 8; ++f) {
        const std::string& cell = fields[static_cast<size_t>(f) + 2];
        if (!cell.empty()) {
          *slots[f] = parse_number_strict(cell, names[f]);
        }
      }
      validate_snapshot(s);
      out.snapshots.push_back(std::move(s));
    } catch (const Error& e) {
      out.warnings.push_back({line_no, coin, e.code(), e.what()});
    }
  }
  return out;
}

inline std::string snapshots_to_csv(std::span<const MarketSnapshot> snaps) {
  std::vector<const MarketSnapshot*> sorted;
  sorted.reserve(snaps.size());
  for (const auto& s : snaps) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const MarketSnapshot* a, const MarketSnapshot* b) {
              return a->coin < b->coin;
            });
  std::string body = kSnapshotCsvHeader;
  body.push_back('\n');
  for (const MarketSnapshot* s : sorted) {
    auto cell = [](const std::optional<double>& v) {
      return v ? fmt_shortest(*v) : std::string();
    };
    body += join_csv({s->coin, s->as_of.to_string(), cell(s->market_cap),
                      cell(s->price), cell(s->volume_24h),
                      cell(s->reddit_subscribers), cell(s->facebook_likes),
                      cell(s->twitter_followers), cell(s->chain_tx_24h),
                      cell(s->mining_difficulty)});
    body.push_back('\n');
  }
  return body;
}

inline void save_snapshot(const std::string& path,
                          std::span<const MarketSnapshot> snaps) {
  write_text_file(path, snapshots_to_csv(snaps));
}

// --- dataset JSON (cache encoding) ------------------------------------------

inline nlohmann::json snapshot_to_json(const MarketSnapshot& s) {
  nlohmann::json j;
  j["as_of"] = s.as_of.to_string();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("market_cap_usd", s.market_cap);
  put("price_usd", s.price);
  put("volume_24h_usd", s.volume_24h);
  put("reddit_subscribers", s.reddit_subscribers);
  put("facebook_likes", s.facebook_likes);
  put("twitter_followers", s.twitter_followers);
  put("chain_tx_24h", s.chain_tx_24h);
  put("mining_difficulty", s.mining_difficulty);
  return j;
}

inline MarketSnapshot snapshot_from_json(const CoinId& coin,
                                         const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("as_of")) {
    raise(Errc::schema_mismatch,
          "snapshot for " + coin + " missing field 'as_of'");
  }
  MarketSnapshot s;
  s.coin = coin;
  s.as_of = Date::parse(j.at("as_of").get<std::string>());
  auto get = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) {
      raise(Errc::schema_mismatch, "snapshot field '" + std::string(key) +
                                       "' for " + coin + " is not a number");
    }
    return j.at(key).get<double>();
  };
  s.market_cap = get("market_cap_usd");
  s.price = get("price_usd");
  s.volume_24h = get("volume_24h_usd");
  s.reddit_subscribers = get("reddit_subscribers");
  s.facebook_likes = get("facebook_likes");
  s.twitter_followers = get("twitter_followers");
  s.chain_tx_24h = get("chain_tx_24h");
  s.mining_difficulty = get("mining_difficulty");
  validate_snapshot(s);
  return s;
}

// --- return-panel CSV -------------------------------------------------------
// Wide layout: `coin,<date>,<date>,...`, one row per coin, empty cell =
// missing. Values carry 12 significant digits so rewrites are stable.

inline std::string panel_to_csv(const ReturnPanel& panel) {
  std::string out = "coin";
  for (const auto& d : panel.dates) {
    out += ',';
    out += d.to_string();
  }
  out += '\n';
  for (size_t i = 0; i < panel.rows(); ++i) {
    out += csv_escape(panel.coins[i]);
    for (size_t t = 0; t < panel.cols(); ++t) {
      out += ',';
      if (const auto& c = panel.cell(i, t)) out += fmt_sig12(*c);
    }
    out += '\n';
  }
  return out;
}

inline void save_panel(const std::string& path, const ReturnPanel& panel) {
  write_text_file(path, panel_to_csv(panel));
}

inline ReturnPanel load_panel(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) {
    raise(Errc::malformed_row, path + ": empty panel file");
  }
  auto header = split_csv_line(lines[0], 1);
  if (header.empty() || header[0] != "coin") {
    raise(Errc::malformed_row,
          path + ":1: expected header starting with 'coin'");
  }
  ReturnPanel panel;
  for (size_t k = 1; k < header.size(); ++k) {
    panel.dates.push_back(Date::parse(header[k]));
  }
  for (size_t k = 1; k < panel.dates.size(); ++k) {
    if (!(panel.dates[k - 1] < panel.dates[k])) {
      raise(Errc::out_of_order_date, path + ": header dates must be increasing");
    }
  }
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty() && ln + 1 == lines.size()) break;
    auto fields = split_csv_line(lines[ln], static_cast<long>(ln) + 1);
    if (fields.size() != header.size()) {
      raise(Errc::malformed_row, path + ":" + std::to_string(ln + 1) +
                                     ": expected " +
                                     std::to_string(header.size()) +
                                     " fields, got " +
                                     std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      raise(Errc::malformed_row,
            path + ":" + std::to_string(ln + 1) + ": empty coin id");
    }
    for (const auto& c : panel.coins) {
      if (c == fields[0]) {
        raise(Errc::duplicate_coin,
              path + ":" + std::to_string(ln + 1) + ": duplicate coin '" +
                  fields[0] + "'");
      }
    }
    panel.coins.push_back(fields[0]);
    for (size_t k = 1; k < fields.size(); ++k) {
      if (fields[k].empty()) {
        panel.cells.push_back(std::nullopt);
      } else {
        panel.cells.push_back(parse_number_strict(
            fields[k], path + ":" + std::to_string(ln + 1) + " cell"));
      }
    }
  }
  if (panel.coins.empty()) {
    raise(Errc::empty_input, path + ": panel has no coins");
  }
  return panel;
}

inline nlohmann::json dataset_to_json(const Dataset& d) {
  nlohmann::json j;
  j["provenance"] = {{"source", d.provenance.source},
                     {"retrieved_at", d.provenance.retrieved_at}};
  nlohmann::json prices = nlohmann::json::object();
  for (const auto& [coin, series] : d.prices) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : series.points) {
      arr.push_back({{"date", p.date.to_string()}, {"close_usd", p.close}});
    }
    prices[coin] = std::move(arr);
  }
  j["prices"] = std::move(prices);
  nlohmann::json snaps = nlohmann::json::object();
  for (const auto& [coin, snap] : d.snapshot) {
    snaps[coin] = snapshot_to_json(snap);
  }
  j["snapshot"] = std::move(snaps);
  return j;
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
  Dataset d;
  if (j.contains("provenance")) {
    d.provenance.source = j.at("provenance").value("source", "");
    d.provenance.retrieved_at = j.at("provenance").value("retrieved_at", "");
  }
  if (j.contains("prices")) {
    for (const auto& [coin, arr] : j.at("prices").items()) {
      std::vector<PricePoint> points;
      for (const auto& p : arr) {
        if (!p.contains("date") || !p.contains("close_usd")) {
          raise(Errc::schema_mismatch,
                "price point for " + coin + " missing 'date' or 'close_usd'");
        }
        points.push_back({Date::parse(p.at("date").get<std::string>()),
                          p.at("close_usd").get<double>()});
      }
      d.prices.emplace(coin, validate_prices(coin, std::move(points)));
    }
  }
  if (j.contains("snapshot")) {
    for (const auto& [coin, sj] : j.at("snapshot").items()) {
      d.snapshot.emplace(coin, snapshot_from_json(coin, sj));
    }
  }
  return d;
}

}  // namespace coinstats
