#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "coinstats/csv.hpp"
#include "coinstats/date.hpp"
#include "coinstats/digest.hpp"
#include "coinstats/error.hpp"
#include "coinstats/ingestion.hpp"

namespace coinstats {

// Remote endpoint descriptor, read from a key=value configuration file.
// Path templates may use {coin}, {start} and {end} placeholders.
struct EndpointConfig {
  std::string base_url;       // e.g. http://127.0.0.1:8080
  std::string prices_path;    // e.g. /v1/prices/{coin}?start={start}&end={end}
  std::string snapshot_path;  // e.g. /v1/snapshot/{coin}
  std::string api_key_env;    // env var holding a bearer token; empty = none
  std::string source_name;    // provenance label; defaults to base_url
  std::string cache_dir;      // raw response cache; empty disables caching
  double rate_limit_rps = 4.0;
  int max_retries = 3;        // additional attempts after the first
  long retry_base_ms = 100;   // backoff: base * 2^attempt
};

// Lines of `key = value`; '#' starts a comment; unknown keys are rejected so
// typos fail loudly.
inline EndpointConfig parse_endpoint_config(const std::string& text,
                                            const std::string& origin) {
  EndpointConfig cfg;
  bool saw_base = false, saw_prices = false, saw_snapshot = false;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    std::string stripped = strip(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      raise(Errc::malformed_row, origin + ":" + std::to_string(line_no) +
                                     ": expected key = value");
    }
    std::string key = strip(stripped.substr(0, eq));
    std::string value = strip(stripped.substr(eq + 1));
    if (key == "base_url") {
      cfg.base_url = value;
      saw_base = true;
    } else if (key == "prices_path") {
      cfg.prices_path = value;
      saw_prices = true;
    } else if (key == "snapshot_path") {
      cfg.snapshot_path = value;
      saw_snapshot = true;
    } else if (key == "api_key_env") {
      cfg.api_key_env = value;
    } else if (key == "source_name") {
      cfg.source_name = value;
    } else if (key == "cache_dir") {
      cfg.cache_dir = value;
    } else if (key == "rate_limit_rps") {
      cfg.rate_limit_rps = parse_number_strict(value, "rate_limit_rps");
      if (!(cfg.rate_limit_rps > 0.0)) {
        raise(Errc::invalid_parameter, "rate_limit_rps must be positive");
      }
    } else if (key == "max_retries") {
      cfg.max_retries =
          static_cast<int>(parse_uint_strict(value, "max_retries"));
    } else if (key == "retry_base_ms") {
      cfg.retry_base_ms =
          static_cast<long>(parse_uint_strict(value, "retry_base_ms"));
    } else {
      raise(Errc::invalid_parameter, origin + ":" + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
    }
  }
  if (!saw_base || !saw_prices || !saw_snapshot) {
    raise(Errc::invalid_parameter,
          origin + ": base_url, prices_path and snapshot_path are required");
  }
  if (cfg.source_name.empty()) cfg.source_name = cfg.base_url;
  return cfg;
}

inline EndpointConfig load_endpoint_config(const std::string& path) {
  return parse_endpoint_config(read_text_file(path), path);
}

namespace detail {

inline std::string expand_template(std::string tmpl, const CoinId& coin,
                                   const Date& start, const Date& end) {
  auto replace_all = [&](const std::string& key, const std::string& value) {
    size_t pos = 0;
    while ((pos = tmpl.find(key, pos)) != std::string::npos) {
      tmpl.replace(pos, key.size(), value);
      pos += value.size();
    }
  };
  replace_all("{coin}", coin);
  replace_all("{start}", start.to_string());
  replace_all("{end}", end.to_string());
  return tmpl;
}

// Spaces requests so no more than rate_limit_rps leave per second.
class RateLimiter {
 public:
  explicit RateLimiter(double rps)
      : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / rps))) {}

  void wait() {
    auto now = std::chrono::steady_clock::now();
    if (armed_ && now < next_) {
      std::this_thread::sleep_for(next_ - now);
      now = next_;
    }
    next_ = now + interval_;
    armed_ = true;
  }

 private:
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_{};
  bool armed_ = false;
};

struct CacheResult {
  bool hit = false;
  std::string body;
};

inline std::filesystem::path cache_path(const EndpointConfig& cfg,
                                        const std::string& request_path) {
  return std::filesystem::path(cfg.cache_dir) /
         (fnv1a64_hex(request_path) + ".json");
}

inline CacheResult cache_lookup(const EndpointConfig& cfg,
                                const std::string& request_path) {
  CacheResult out;
  if (cfg.cache_dir.empty()) return out;
  auto p = cache_path(cfg, request_path);
  std::error_code ec;
  if (!std::filesystem::exists(p, ec)) return out;
  auto j = nlohmann::json::parse(read_text_file(p.string()), nullptr, false);
  if (j.is_discarded() || !j.contains("path") || !j.contains("body") ||
      j.at("path").get<std::string>() != request_path) {
    return out;  // unusable entry: refetch and overwrite
  }
  out.hit = true;
  out.body = j.at("body").get<std::string>();
  return out;
}

inline void cache_store(const EndpointConfig& cfg,
                        const std::string& request_path,
                        const std::string& body) {
  if (cfg.cache_dir.empty()) return;
  std::filesystem::create_directories(cfg.cache_dir);
  nlohmann::json j;
  j["path"] = request_path;
  j["body"] = body;
  write_text_file(cache_path(cfg, request_path).string(), j.dump(2) + "\n");
}

// One GET with cache, rate limiting, bearer auth, and exponential-backoff
// retries on transport errors, 429 and 5xx.
class Fetcher {
 public:
  explicit Fetcher(const EndpointConfig& cfg) : cfg_(cfg), limiter_(cfg.rate_limit_rps) {
    if (!cfg_.api_key_env.empty()) {
      const char* key = std::getenv(cfg_.api_key_env.c_str());
      if (key == nullptr || *key == '\0') {
        raise(Errc::invalid_parameter,
              "environment variable " + cfg_.api_key_env +
                  " named by api_key_env is not set");
      }
      bearer_ = key;
    }
  }

  std::string get(const std::string& request_path) {
    auto cached = cache_lookup(cfg_, request_path);
    if (cached.hit) return cached.body;

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        auto delay = std::chrono::milliseconds(cfg_.retry_base_ms)
                     * (1LL << (attempt - 1));
        std::this_thread::sleep_for(delay);
      }
      limiter_.wait();
      auto res = client().Get(request_path, headers());
      if (!res) {
        last_error = "transport error " + std::string(httplib::to_string(res.error()));
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        raise(Errc::network_error, "GET " + request_path + " failed: HTTP " +
                                       std::to_string(res->status));
      }
      cache_store(cfg_, request_path, res->body);
      return res->body;
    }
    raise(Errc::network_error,
          "GET " + request_path + " failed after " +
              std::to_string(cfg_.max_retries + 1) + " attempts: " +
              last_error);
  }

 private:
  httplib::Client& client() {
    if (!client_) {
      client_ = std::make_unique<httplib::Client>(cfg_.base_url);
      client_->set_connection_timeout(5, 0);
      client_->set_read_timeout(10, 0);
    }
    return *client_;
  }

  httplib::Headers headers() const {
    httplib::Headers h;
    if (!bearer_.empty()) {
      h.emplace("Authorization", "Bearer " + bearer_);
    }
    return h;
  }

  const EndpointConfig& cfg_;
  RateLimiter limiter_;
  std::string bearer_;
  std::unique_ptr<httplib::Client> client_;
};

inline PriceSeries prices_from_wire(const CoinId& coin,
                                    const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    raise(Errc::schema_mismatch,
          "prices response for " + coin + " is not valid JSON");
  }
  if (!j.contains("prices") || !j.at("prices").is_array()) {
    raise(Errc::schema_mismatch,
          "prices response for " + coin + " missing field 'prices'");
  }
  std::vector<PricePoint> points;
  for (const auto& p : j.at("prices")) {
    if (!p.contains("date")) {
      raise(Errc::schema_mismatch,
            "price point for " + coin + " missing field 'date'");
    }
    if (!p.contains("close_usd") || !p.at("close_usd").is_number()) {
      raise(Errc::schema_mismatch,
            "price point for " + coin + " missing field 'close_usd'");
    }
    points.push_back({Date::parse(p.at("date").get<std::string>()),
                      p.at("close_usd").get<double>()});
  }
  return validate_prices(coin, std::move(points));
}

inline MarketSnapshot snapshot_from_wire(const CoinId& coin,
                                         const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    raise(Errc::schema_mismatch,
          "snapshot response for " + coin + " is not valid JSON");
  }
  return snapshot_from_json(coin, j);
}

}  // namespace detail

// Pulls price history and a snapshot for every requested coin. Responses are
// cached raw under cache_dir, so a rerun with a warm cache issues zero
// requests; the Dataset is keyed by coin, so arrival order cannot matter.
inline Dataset fetch_remote(const EndpointConfig& cfg,
                            std::vector<CoinId> coins, Date start, Date end) {
  Dataset out;
  out.provenance.source = cfg.source_name;
  if (coins.empty()) return out;  // zero requests by contract

  std::sort(coins.begin(), coins.end());
  coins.erase(std::unique(coins.begin(), coins.end()), coins.end());

  detail::Fetcher fetcher(cfg);
  for (const auto& coin : coins) {
    auto prices_req = detail::expand_template(cfg.prices_path, coin, start, end);
    out.prices.emplace(
        coin, detail::prices_from_wire(coin, fetcher.get(prices_req)));
    auto snap_req = detail::expand_template(cfg.snapshot_path, coin, start, end);
    out.snapshot.emplace(
        coin, detail::snapshot_from_wire(coin, fetcher.get(snap_req)));
  }

  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  out.provenance.retrieved_at = buf;
  return out;
}

}  // namespace coinstats
