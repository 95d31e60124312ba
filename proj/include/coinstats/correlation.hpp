#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coinstats/error.hpp"
#include "coinstats/timeseries.hpp"

namespace coinstats {

inline constexpr long long kDefaultMinOverlap = 3;
inline constexpr int kDefaultCorrelationBins = 50;
// |rho vs anchor| at or above this leaves no residual variance to correlate.
inline constexpr double kDegenerateAnchorBound = 1.0 - 1e-12;

// Single-pass co-moment accumulation (bivariate Welford). The (n-1)
// denominators cancel in the correlation ratio, so only the centered
// sums are kept. A constant input yields an exactly-zero M2.
class PearsonAccumulator {
 public:
  void add(double x, double y) {
    n_ += 1;
    double dx = x - mean_x_;
    mean_x_ += dx / static_cast<double>(n_);
    double dy = y - mean_y_;
    mean_y_ += dy / static_cast<double>(n_);
    m2x_ += dx * (x - mean_x_);
    m2y_ += dy * (y - mean_y_);
    cxy_ += dx * (y - mean_y_);
  }

  long long count() const { return n_; }
  bool x_constant() const { return m2x_ <= 0.0; }
  bool y_constant() const { return m2y_ <= 0.0; }

  // Clamped to [-1, 1]; callers must screen constants first.
  double correlation() const {
    double r = cxy_ / (std::sqrt(m2x_) * std::sqrt(m2y_));
    return std::clamp(r, -1.0, 1.0);
  }

 private:
  long long n_ = 0;
  double mean_x_ = 0.0, mean_y_ = 0.0;
  double m2x_ = 0.0, m2y_ = 0.0, cxy_ = 0.0;
};

namespace detail {

inline void check_min_overlap_param(long long min_overlap) {
  if (min_overlap < 2) {
    raise(Errc::invalid_parameter, "min overlap must be at least 2");
  }
}

inline double finish_pearson(const PearsonAccumulator& acc,
                             long long min_overlap) {
  if (acc.count() < min_overlap) {
    raise(Errc::insufficient_overlap,
          "only " + std::to_string(acc.count()) + " overlapping observations, need " +
              std::to_string(min_overlap));
  }
  if (acc.x_constant() || acc.y_constant()) {
    raise(Errc::zero_variance,
          std::string(acc.x_constant() ? "first" : "second") +
              " input is constant over the overlap");
  }
  return acc.correlation();
}

}  // namespace detail

// Sample Pearson coefficient of two fully-observed vectors.
inline double pearson(std::span<const double> x, std::span<const double> y,
                      long long min_overlap = kDefaultMinOverlap) {
  detail::check_min_overlap_param(min_overlap);
  if (x.size() != y.size()) {
    raise(Errc::invalid_parameter, "pearson inputs have different lengths");
  }
  PearsonAccumulator acc;
  for (size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
  return detail::finish_pearson(acc, min_overlap);
}

// Pairwise-complete variant: positions where either value is missing are
// deleted before the coefficient is computed.
inline double pearson(std::span<const std::optional<double>> x,
                      std::span<const std::optional<double>> y,
                      long long min_overlap = kDefaultMinOverlap) {
  detail::check_min_overlap_param(min_overlap);
  if (x.size() != y.size()) {
    raise(Errc::invalid_parameter, "pearson inputs have different lengths");
  }
  PearsonAccumulator acc;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) acc.add(*x[i], *y[i]);
  }
  return detail::finish_pearson(acc, min_overlap);
}

// First-order partial correlation of i and j with the anchor's influence
// removed. Inputs must come from a common sample for the residual identity
// to hold.
inline double partial_correlation(double rho_ij, double rho_ib,
                                  double rho_jb) {
  if (std::fabs(rho_ib) >= kDegenerateAnchorBound ||
      std::fabs(rho_jb) >= kDegenerateAnchorBound) {
    raise(Errc::degenerate_anchor,
          "anchor correlation at or beyond +/-1, no residual variance");
  }
  double denom =
      std::sqrt(1.0 - rho_ib * rho_ib) * std::sqrt(1.0 - rho_jb * rho_jb);
  double value = (rho_ij - rho_ib * rho_jb) / denom;
  if (value > 1.0 || value < -1.0) {
    if (std::fabs(value) > 1.0 + 1e-9) {
      raise(Errc::out_of_range,
            "partial correlation " + std::to_string(value) +
                " outside [-1, 1]; inputs are inconsistent");
    }
    value = std::clamp(value, -1.0, 1.0);
  }
  return value;
}

enum class CorrelationKind { pearson, partial };

struct CorrelationMatrix {
  CorrelationKind kind = CorrelationKind::pearson;
  CoinId anchor;  // set iff kind == partial; never among coins
  std::vector<CoinId> coins;
  std::vector<double> values;      // n x n, symmetric, unit diagonal
  std::vector<long long> support;  // n x n per-pair observation counts

  size_t size() const { return coins.size(); }
  double value(size_t i, size_t j) const { return values[i * size() + j]; }
  long long support_at(size_t i, size_t j) const {
    return support[i * size() + j];
  }

  // Throws if any type invariant is violated.
  void validate() const {
    size_t n = size();
    if (values.size() != n * n || support.size() != n * n) {
      raise(Errc::out_of_range, "matrix storage does not match coin count");
    }
    for (size_t i = 0; i < n; ++i) {
      if (kind == CorrelationKind::partial && coins[i] == anchor) {
        raise(Errc::out_of_range, "anchor present among partial-matrix coins");
      }
      if (value(i, i) != 1.0) {
        raise(Errc::out_of_range, "diagonal not 1 at " + coins[i]);
      }
      for (size_t j = 0; j < n; ++j) {
        double v = value(i, j);
        if (v != value(j, i)) {
          raise(Errc::out_of_range, "asymmetry at " + coins[i] + "," + coins[j]);
        }
        if (v < -1.0 - 1e-9 || v > 1.0 + 1e-9) {
          raise(Errc::out_of_range, "value outside [-1, 1] at " + coins[i] +
                                        "," + coins[j]);
        }
      }
    }
  }
};

struct Exclusion {
  CoinId coin;
  Errc reason = Errc::zero_variance;
  std::string detail;
};

struct MatrixResult {
  CorrelationMatrix matrix;
  std::vector<Exclusion> exclusions;
};

namespace detail {

struct PairFailure {
  size_t a, b;  // indices into the candidate list
  Errc reason;
};

// Pairs that cannot be computed leave holes a square matrix cannot carry, so
// coins are removed greedily (most failing pairs first, lowest index on ties)
// until every remaining pair is usable. Removed coins land in `exclusions`.
inline std::vector<bool> resolve_pair_failures(
    const std::vector<CoinId>& candidates,
    std::vector<PairFailure> failures, std::vector<Exclusion>& exclusions) {
  std::vector<bool> removed(candidates.size(), false);
  while (!failures.empty()) {
    std::vector<int> degree(candidates.size(), 0);
    for (const auto& f : failures) {
      degree[f.a] += 1;
      degree[f.b] += 1;
    }
    size_t worst = 0;
    for (size_t i = 1; i < degree.size(); ++i) {
      if (degree[i] > degree[worst]) worst = i;
    }
    removed[worst] = true;
    Errc reason = Errc::insufficient_overlap;
    int count = 0;
    for (const auto& f : failures) {
      if (f.a == worst || f.b == worst) {
        if (count == 0) reason = f.reason;
        ++count;
      }
    }
    exclusions.push_back(Exclusion{
        candidates[worst], reason,
        std::to_string(count) + " pair(s) unusable against other coins"});
    std::erase_if(failures, [worst](const PairFailure& f) {
      return f.a == worst || f.b == worst;
    });
  }
  return removed;
}

inline long long present_count(const ReturnPanel& panel, size_t row) {
  long long n = 0;
  for (size_t t = 0; t < panel.cols(); ++t) {
    if (panel.cell(row, t)) ++n;
  }
  return n;
}

inline bool row_constant(const ReturnPanel& panel, size_t row) {
  PearsonAccumulator acc;
  for (size_t t = 0; t < panel.cols(); ++t) {
    if (panel.cell(row, t)) acc.add(*panel.cell(row, t), 0.0);
  }
  return acc.count() >= 1 && acc.x_constant();
}

}  // namespace detail

// Full pairwise-complete Pearson matrix. Coins that cannot participate
// (too few observations, constant over their support, or involved in
// unusable pairs) are reported in the exclusion list; the matrix covers
// the remaining coins.
inline MatrixResult pearson_matrix(const ReturnPanel& panel,
                                   long long min_overlap = kDefaultMinOverlap) {
  detail::check_min_overlap_param(min_overlap);
  if (panel.rows() < 2) {
    raise(Errc::too_few_coins, "need at least 2 coins, have " +
                                   std::to_string(panel.rows()));
  }

  MatrixResult out;
  std::vector<size_t> candidate_rows;
  for (size_t i = 0; i < panel.rows(); ++i) {
    long long n = detail::present_count(panel, i);
    if (n < min_overlap) {
      out.exclusions.push_back(
          Exclusion{panel.coins[i], Errc::insufficient_overlap,
                    "only " + std::to_string(n) + " observations"});
      continue;
    }
    if (detail::row_constant(panel, i)) {
      out.exclusions.push_back(Exclusion{panel.coins[i], Errc::zero_variance,
                                         "constant over its support"});
      continue;
    }
    candidate_rows.push_back(i);
  }

  size_t m = candidate_rows.size();
  std::vector<CoinId> candidates;
  candidates.reserve(m);
  for (size_t r : candidate_rows) candidates.push_back(panel.coins[r]);

  std::vector<double> rho(m * m, 1.0);
  std::vector<long long> nobs(m * m, 0);
  std::vector<detail::PairFailure> failures;
  for (size_t a = 0; a < m; ++a) {
    nobs[a * m + a] = detail::present_count(panel, candidate_rows[a]);
    for (size_t b = a + 1; b < m; ++b) {
      PearsonAccumulator acc;
      for (size_t t = 0; t < panel.cols(); ++t) {
        const auto& xa = panel.cell(candidate_rows[a], t);
        const auto& xb = panel.cell(candidate_rows[b], t);
        if (xa && xb) acc.add(*xa, *xb);
      }
      nobs[a * m + b] = nobs[b * m + a] = acc.count();
      if (acc.count() < min_overlap) {
        failures.push_back({a, b, Errc::insufficient_overlap});
      } else if (acc.x_constant() || acc.y_constant()) {
        failures.push_back({a, b, Errc::zero_variance});
      } else {
        rho[a * m + b] = rho[b * m + a] = acc.correlation();
      }
    }
  }

  std::vector<bool> removed =
      detail::resolve_pair_failures(candidates, std::move(failures),
                                    out.exclusions);

  CorrelationMatrix& mat = out.matrix;
  mat.kind = CorrelationKind::pearson;
  for (size_t a = 0; a < m; ++a) {
    if (!removed[a]) mat.coins.push_back(candidates[a]);
  }
  size_t n = mat.coins.size();
  mat.values.assign(n * n, 1.0);
  mat.support.assign(n * n, 0);
  size_t ii = 0;
  for (size_t a = 0; a < m; ++a) {
    if (removed[a]) continue;
    size_t jj = 0;
    for (size_t b = 0; b < m; ++b) {
      if (removed[b]) continue;
      mat.values[ii * n + jj] = rho[a * m + b];
      mat.support[ii * n + jj] = nobs[a * m + b];
      ++jj;
    }
    ++ii;
  }
  return out;
}

// Partial-correlation matrix with the anchor's returns removed. For each
// pair the three Pearson inputs are computed on the joint support of i, j,
// and the anchor, which keeps the residual-regression identity exact.
inline MatrixResult partial_matrix(const ReturnPanel& panel,
                                   const CoinId& anchor,
                                   long long min_overlap = kDefaultMinOverlap) {
  detail::check_min_overlap_param(min_overlap);
  long anchor_row = panel.coin_index(anchor);
  if (anchor_row < 0) {
    raise(Errc::anchor_missing, "anchor " + anchor + " not in panel");
  }
  if (panel.rows() < 3) {
    raise(Errc::too_few_coins,
          "need at least 2 coins besides the anchor, have " +
              std::to_string(panel.rows() ? panel.rows() - 1 : 0));
  }

  MatrixResult out;
  std::vector<size_t> candidate_rows;
  for (size_t i = 0; i < panel.rows(); ++i) {
    if (static_cast<long>(i) == anchor_row) continue;
    PearsonAccumulator acc;
    for (size_t t = 0; t < panel.cols(); ++t) {
      const auto& xi = panel.cell(i, t);
      const auto& xb = panel.cell(static_cast<size_t>(anchor_row), t);
      if (xi && xb) acc.add(*xi, *xb);
    }
    if (acc.count() < min_overlap) {
      out.exclusions.push_back(
          Exclusion{panel.coins[i], Errc::insufficient_overlap,
                    "only " + std::to_string(acc.count()) +
                        " observations overlap the anchor"});
      continue;
    }
    if (acc.x_constant() || acc.y_constant()) {
      out.exclusions.push_back(Exclusion{panel.coins[i], Errc::zero_variance,
                                         "constant over the anchor overlap"});
      continue;
    }
    if (std::fabs(acc.correlation()) >= kDegenerateAnchorBound) {
      out.exclusions.push_back(
          Exclusion{panel.coins[i], Errc::degenerate_anchor,
                    "correlation with anchor is +/-1"});
      continue;
    }
    candidate_rows.push_back(i);
  }

  size_t m = candidate_rows.size();
  std::vector<CoinId> candidates;
  candidates.reserve(m);
  for (size_t r : candidate_rows) candidates.push_back(panel.coins[r]);

  std::vector<double> rho(m * m, 1.0);
  std::vector<long long> nobs(m * m, 0);
  std::vector<detail::PairFailure> failures;
  const size_t brow = static_cast<size_t>(anchor_row);
  for (size_t a = 0; a < m; ++a) {
    nobs[a * m + a] = detail::present_count(panel, candidate_rows[a]);
    for (size_t b = a + 1; b < m; ++b) {
      PearsonAccumulator ij, ib, jb;
      for (size_t t = 0; t < panel.cols(); ++t) {
        const auto& xi = panel.cell(candidate_rows[a], t);
        const auto& xj = panel.cell(candidate_rows[b], t);
        const auto& xb = panel.cell(brow, t);
        if (xi && xj && xb) {
          ij.add(*xi, *xj);
          ib.add(*xi, *xb);
          jb.add(*xj, *xb);
        }
      }
      nobs[a * m + b] = nobs[b * m + a] = ij.count();
      if (ij.count() < min_overlap) {
        failures.push_back({a, b, Errc::insufficient_overlap});
        continue;
      }
      if (ij.x_constant() || ij.y_constant() || ib.y_constant()) {
        failures.push_back({a, b, Errc::zero_variance});
        continue;
      }
      double rho_ib = ib.correlation();
      double rho_jb = jb.correlation();
      if (std::fabs(rho_ib) >= kDegenerateAnchorBound ||
          std::fabs(rho_jb) >= kDegenerateAnchorBound) {
        failures.push_back({a, b, Errc::degenerate_anchor});
        continue;
      }
      rho[a * m + b] = rho[b * m + a] =
          partial_correlation(ij.correlation(), rho_ib, rho_jb);
    }
  }

  std::vector<bool> removed =
      detail::resolve_pair_failures(candidates, std::move(failures),
                                    out.exclusions);

  CorrelationMatrix& mat = out.matrix;
  mat.kind = CorrelationKind::partial;
  mat.anchor = anchor;
  for (size_t a = 0; a < m; ++a) {
    if (!removed[a]) mat.coins.push_back(candidates[a]);
  }
  size_t n = mat.coins.size();
  mat.values.assign(n * n, 1.0);
  mat.support.assign(n * n, 0);
  size_t ii = 0;
  for (size_t a = 0; a < m; ++a) {
    if (removed[a]) continue;
    size_t jj = 0;
    for (size_t b = 0; b < m; ++b) {
      if (removed[b]) continue;
      mat.values[ii * n + jj] = rho[a * m + b];
      mat.support[ii * n + jj] = nobs[a * m + b];
      ++jj;
    }
    ++ii;
  }
  return out;
}

struct HistogramBin {
  double lo = 0.0, hi = 0.0;
  long long count = 0;
};

struct DistributionSummary {
  long long count = 0;
  double median = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population form, well-defined for count == 1
  std::vector<HistogramBin> histogram;
};

// Equal-width histogram over a fixed range plus order/moment statistics.
// The last bin is closed so the upper endpoint lands inside.
inline DistributionSummary summarize_fixed_range(std::vector<double> values,
                                                 int bins, double lo,
                                                 double hi) {
  if (bins < 1) {
    raise(Errc::invalid_parameter, "bin count must be at least 1");
  }
  if (!(hi > lo)) {
    raise(Errc::invalid_parameter, "histogram range is empty");
  }
  DistributionSummary out;
  out.count = static_cast<long long>(values.size());
  out.histogram.resize(static_cast<size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    out.histogram[b].lo = lo + (hi - lo) * b / bins;
    out.histogram[b].hi = lo + (hi - lo) * (b + 1) / bins;
  }
  if (values.empty()) return out;

  double sum = 0.0;
  for (double v : values) {
    int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
    idx = std::clamp(idx, 0, bins - 1);
    out.histogram[idx].count += 1;
    sum += v;
  }
  out.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(values.size()));

  std::sort(values.begin(), values.end());
  size_t n = values.size();
  out.median = (n % 2 == 1) ? values[n / 2]
                            : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return out;
}

// Distribution of the anchor's pairwise correlations with every other coin.
// Coins whose coefficient cannot be computed are skipped.
inline DistributionSummary anchor_distribution(
    const ReturnPanel& panel, const CoinId& anchor,
    int bins = kDefaultCorrelationBins,
    long long min_overlap = kDefaultMinOverlap) {
  long anchor_row = panel.coin_index(anchor);
  if (anchor_row < 0) {
    raise(Errc::anchor_missing, "anchor " + anchor + " not in panel");
  }
  if (panel.rows() < 2) {
    raise(Errc::too_few_coins, "need at least 2 coins");
  }
  std::vector<double> coeffs;
  const size_t brow = static_cast<size_t>(anchor_row);
  for (size_t i = 0; i < panel.rows(); ++i) {
    if (i == brow) continue;
    PearsonAccumulator acc;
    for (size_t t = 0; t < panel.cols(); ++t) {
      const auto& xi = panel.cell(i, t);
      const auto& xb = panel.cell(brow, t);
      if (xi && xb) acc.add(*xi, *xb);
    }
    if (acc.count() < min_overlap || acc.x_constant() || acc.y_constant()) {
      continue;
    }
    coeffs.push_back(acc.correlation());
  }
  if (coeffs.empty()) {
    raise(Errc::too_few_coins,
          "no coin has a computable correlation with the anchor");
  }
  return summarize_fixed_range(std::move(coeffs), bins, -1.0, 1.0);
}

// Distribution over the strict upper triangle: each unordered pair once.
inline DistributionSummary offdiagonal_distribution(
    const CorrelationMatrix& matrix, int bins = kDefaultCorrelationBins) {
  if (matrix.size() < 2) {
    raise(Errc::too_few_coins, "matrix has fewer than 2 coins");
  }
  std::vector<double> values;
  values.reserve(matrix.size() * (matrix.size() - 1) / 2);
  for (size_t i = 0; i < matrix.size(); ++i) {
    for (size_t j = i + 1; j < matrix.size(); ++j) {
      values.push_back(matrix.value(i, j));
    }
  }
  return summarize_fixed_range(std::move(values), bins, -1.0, 1.0);
}

}  // namespace coinstats
