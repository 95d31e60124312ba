#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "coinstats/date.hpp"
#include "coinstats/error.hpp"
#include "coinstats/timeseries.hpp"

namespace coinstats {

namespace detail {

// Deterministic double streams on top of mt19937_64, whose output sequence
// is pinned by the standard. std::*_distribution is avoided because its
// stream differs between standard libraries; these transforms do not.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double sd) {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    return sd * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace detail

// One-factor market model: the anchor's daily log return is i.i.d. noise and
// every other coin's return is beta_i * anchor + epsilon_i.
struct SimulateParams {
  long long coins = 50;        // total, anchor included
  long long days = 300;        // daily closes per coin (returns: days - 1)
  double beta_lo = 0.3;
  double beta_hi = 1.5;
  double noise = 0.03;         // stddev of epsilon
  double anchor_vol = 0.05;    // stddev of the anchor's returns
  std::uint64_t seed = 0;      // no default in the CLI; explicit here
  CoinId anchor_id = "BTC";
  Date start = Date::parse("2018-01-01");
};

// Draw order (pinned for reproducibility): betas for every non-anchor coin,
// then the anchor's returns, then each coin's noise sequence in coin order.
// Prices integrate the returns from a unit start, so they are positive by
// construction and the recovered log returns telescope back exactly.
inline std::vector<PriceSeries> simulate_market(const SimulateParams& p) {
  if (p.coins < 3) {
    raise(Errc::invalid_parameter, "need at least 3 coins (anchor plus 2)");
  }
  if (p.days < 2) {
    raise(Errc::invalid_parameter, "need at least 2 days for one return");
  }
  if (!(p.beta_lo <= p.beta_hi)) {
    raise(Errc::invalid_parameter, "beta range is empty");
  }
  if (p.noise < 0.0 || !(p.anchor_vol > 0.0)) {
    raise(Errc::invalid_parameter,
          "noise must be >= 0 and anchor volatility > 0");
  }
  if (p.anchor_id.empty()) {
    raise(Errc::invalid_parameter, "empty anchor id");
  }

  detail::SimRng rng(p.seed);
  size_t alts = static_cast<size_t>(p.coins) - 1;
  size_t steps = static_cast<size_t>(p.days) - 1;

  std::vector<double> betas(alts);
  for (auto& b : betas) b = rng.uniform(p.beta_lo, p.beta_hi);

  std::vector<double> anchor(steps);
  for (auto& r : anchor) r = rng.normal(p.anchor_vol);

  std::vector<std::vector<double>> returns;
  returns.reserve(alts + 1);
  returns.push_back(anchor);
  for (size_t i = 0; i < alts; ++i) {
    std::vector<double> r(steps);
    for (size_t t = 0; t < steps; ++t) {
      r[t] = betas[i] * anchor[t] + rng.normal(p.noise);
    }
    returns.push_back(std::move(r));
  }

  int width = 1;
  for (size_t v = alts; v >= 10; v /= 10) ++width;
  auto alt_name = [&](size_t i) {
    std::string digits = std::to_string(i + 1);
    return "ALT" + std::string(static_cast<size_t>(width) - digits.size(), '0') +
           digits;
  };

  std::vector<PriceSeries> out;
  out.reserve(alts + 1);
  for (size_t c = 0; c < returns.size(); ++c) {
    PriceSeries s;
    s.coin = c == 0 ? p.anchor_id : alt_name(c - 1);
    s.points.reserve(steps + 1);
    double log_price = 0.0;
    s.points.push_back({p.start, 1.0});
    for (size_t t = 0; t < steps; ++t) {
      log_price += returns[c][t];
      s.points.push_back(
          {p.start.plus_days(static_cast<long>(t) + 1), std::exp(log_price)});
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace coinstats
