#include "coinstats/correlation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "coinstats/error.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using coinstats::CorrelationKind;
using coinstats::Errc;
using coinstats::Error;
using coinstats::ReturnPanel;
using testutil::make_panel;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::invalid_parameter;
}

std::vector<double> random_vec(testutil::Rng& rng, size_t n, double sd = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal(0.0, sd);
  return v;
}

TEST(Pearson, PerfectlyCorrelatedAndAnticorrelated) {
  std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> y{3.0, 2.0, 1.0};
  EXPECT_NEAR(coinstats::pearson(x, x), 1.0, 1e-12);
  EXPECT_NEAR(coinstats::pearson(x, y), -1.0, 1e-12);
}

TEST(Pearson, MatchesTwoPassOracle) {
  testutil::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = static_cast<size_t>(rng.integer(3, 300));
    auto x = random_vec(rng, n);
    std::vector<double> y(n);
    double mix = rng.uniform(-1.0, 1.0);
    for (size_t k = 0; k < n; ++k) {
      y[k] = mix * x[k] + rng.normal(0.0, 0.8);
    }
    EXPECT_NEAR(coinstats::pearson(x, y), oracle::pearson_direct(x, y), 1e-12);
  }
}

TEST(Pearson, SelfCorrelationIsOne) {
  testutil::Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_vec(rng, static_cast<size_t>(rng.integer(3, 100)));
    EXPECT_NEAR(coinstats::pearson(x, x), 1.0, 1e-12);
  }
}

TEST(Pearson, InvariantUnderAffineMaps) {
  testutil::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_vec(rng, 80);
    auto y = random_vec(rng, 80);
    double r = coinstats::pearson(x, y);
    double a = rng.uniform(0.1, 10.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
    double b = rng.uniform(-100.0, 100.0);
    std::vector<double> xt(80);
    for (size_t k = 0; k < 80; ++k) xt[k] = a * x[k] + b;
    double rt = coinstats::pearson(xt, y);
    EXPECT_NEAR(rt, (a > 0 ? r : -r), 1e-10);
  }
}

TEST(Pearson, SymmetricInArguments) {
  testutil::Rng rng(14);
  auto x = random_vec(rng, 64);
  auto y = random_vec(rng, 64);
  EXPECT_NEAR(coinstats::pearson(x, y), coinstats::pearson(y, x), 1e-12);
}

TEST(Pearson, RejectsConstantInput) {
  std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> c{4.0, 4.0, 4.0};
  EXPECT_EQ(code_of([&] { coinstats::pearson(x, c); }), Errc::zero_variance);
  EXPECT_EQ(code_of([&] { coinstats::pearson(c, x); }), Errc::zero_variance);
}

TEST(Pearson, EnforcesMinOverlap) {
  std::vector<double> x{1.0, 2.0};
  std::vector<double> y{2.0, 1.0};
  EXPECT_EQ(code_of([&] { coinstats::pearson(x, y); }),
            Errc::insufficient_overlap);
  std::vector<double> x4{1.0, 2.0, 3.0, 5.0};
  std::vector<double> y4{2.0, 1.0, 4.0, 3.0};
  EXPECT_NO_THROW(coinstats::pearson(x4, y4));
  EXPECT_EQ(code_of([&] { coinstats::pearson(x4, y4, 5); }),
            Errc::insufficient_overlap);
  EXPECT_EQ(code_of([&] { coinstats::pearson(x4, y4, 1); }),
            Errc::invalid_parameter);  // floor is 2
}

TEST(Pearson, PairwiseDeletionMatchesCompleteCaseOracle) {
  testutil::Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    size_t n = 120;
    std::vector<std::optional<double>> x(n), y(n);
    for (size_t k = 0; k < n; ++k) {
      if (rng.uniform01() < 0.8) x[k] = rng.normal();
      if (rng.uniform01() < 0.8) y[k] = rng.normal();
    }
    auto want = oracle::pearson_pairwise_direct(x, y, 3);
    ASSERT_TRUE(want.has_value());
    EXPECT_NEAR(coinstats::pearson(x, y), *want, 1e-12);
  }
}

TEST(PartialCorrelation, IndependentAnchorChangesNothing) {
  EXPECT_EQ(coinstats::partial_correlation(0.5, 0.0, 0.0), 0.5);
}

TEST(PartialCorrelation, FullyExplainedPairGoesToZero) {
  EXPECT_NEAR(coinstats::partial_correlation(0.06, 0.2, 0.3), 0.0, 1e-15);
}

TEST(PartialCorrelation, DegenerateAnchorRejected) {
  EXPECT_EQ(code_of([] { coinstats::partial_correlation(0.5, 1.0, 0.2); }),
            Errc::degenerate_anchor);
  EXPECT_EQ(code_of([] { coinstats::partial_correlation(0.5, 0.2, -1.0); }),
            Errc::degenerate_anchor);
  EXPECT_EQ(code_of([] {
              coinstats::partial_correlation(0.5, 1.0 - 1e-13, 0.2);
            }),
            Errc::degenerate_anchor);
  // Just inside the bound with a consistent rho_ij: computable.
  EXPECT_NO_THROW(coinstats::partial_correlation(0.2, 1.0 - 1e-11, 0.2));
}

TEST(PartialCorrelation, TinyOvershootClampsLargeOvershootThrows) {
  // rho_ib * rho_jb = -0.64, denominator = 0.36: solving for a target value v
  // gives rho_ij = 0.36 v - 0.64.
  double near_one = 0.36 * (1.0 + 5e-10) - 0.64;
  EXPECT_EQ(coinstats::partial_correlation(near_one, 0.8, -0.8), 1.0);
  double beyond = 0.36 * (1.0 + 5e-9) - 0.64;
  EXPECT_EQ(code_of([&] { coinstats::partial_correlation(beyond, 0.8, -0.8); }),
            Errc::out_of_range);
}

TEST(PartialCorrelation, MatchesResidualRegressionOracle) {
  testutil::Rng rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = static_cast<size_t>(rng.integer(10, 400));
    auto anchor = random_vec(rng, n, 0.05);
    std::vector<double> xi(n), xj(n);
    double bi = rng.uniform(-1.5, 1.5), bj = rng.uniform(-1.5, 1.5);
    for (size_t k = 0; k < n; ++k) {
      xi[k] = bi * anchor[k] + rng.normal(0.0, 0.03);
      xj[k] = bj * anchor[k] + rng.normal(0.0, 0.03);
    }
    double got = coinstats::partial_correlation(
        coinstats::pearson(xi, xj), coinstats::pearson(xi, anchor),
        coinstats::pearson(xj, anchor));
    double want = oracle::partial_via_residuals(xi, xj, anchor);
    EXPECT_NEAR(got, want, 1e-8);
  }
}

TEST(PearsonMatrix, TwoIdenticalRows) {
  auto p = make_panel({"A", "B"}, std::vector<std::vector<double>>{
                                      {0.01, -0.02, 0.03, 0.005},
                                      {0.01, -0.02, 0.03, 0.005}});
  auto res = coinstats::pearson_matrix(p);
  EXPECT_TRUE(res.exclusions.empty());
  ASSERT_EQ(res.matrix.size(), 2u);
  EXPECT_NEAR(res.matrix.value(0, 1), 1.0, 1e-12);
  EXPECT_EQ(res.matrix.value(0, 0), 1.0);
  EXPECT_EQ(res.matrix.support_at(0, 1), 4);
  res.matrix.validate();
}

TEST(PearsonMatrix, MatchesPerPairOracle) {
  testutil::Rng rng(17);
  auto p = testutil::anchored_panel(rng, 10, 120, 0.3, 1.5, 0.05, 0.03);
  auto res = coinstats::pearson_matrix(p);
  EXPECT_TRUE(res.exclusions.empty());
  ASSERT_EQ(res.matrix.size(), 10u);
  res.matrix.validate();
  for (size_t i = 0; i < 10; ++i) {
    std::vector<double> xi, xj;
    for (size_t j = i + 1; j < 10; ++j) {
      xi.clear();
      xj.clear();
      for (size_t t = 0; t < p.cols(); ++t) {
        xi.push_back(*p.cell(i, t));
        xj.push_back(*p.cell(j, t));
      }
      EXPECT_NEAR(res.matrix.value(i, j), oracle::pearson_direct(xi, xj),
                  1e-12);
    }
  }
}

TEST(PearsonMatrix, ConstantRowExcluded) {
  auto p = make_panel({"A", "B", "C"},
                      std::vector<std::vector<double>>{
                          {0.01, -0.02, 0.03, 0.004},
                          {0.007, 0.007, 0.007, 0.007},
                          {0.02, 0.01, -0.03, 0.015}});
  auto res = coinstats::pearson_matrix(p);
  ASSERT_EQ(res.exclusions.size(), 1u);
  EXPECT_EQ(res.exclusions[0].coin, "B");
  EXPECT_EQ(res.exclusions[0].reason, Errc::zero_variance);
  ASSERT_EQ(res.matrix.size(), 2u);
  EXPECT_EQ(res.matrix.coins, (std::vector<coinstats::CoinId>{"A", "C"}));
  res.matrix.validate();
}

TEST(PearsonMatrix, ShortRowExcludedBeforePairStage) {
  std::vector<std::vector<std::optional<double>>> rows{
      {0.01, -0.02, 0.03, 0.004},
      {0.02, std::nullopt, std::nullopt, std::nullopt},
      {0.02, 0.01, -0.03, 0.015}};
  auto res = coinstats::pearson_matrix(make_panel({"A", "B", "C"}, rows));
  ASSERT_EQ(res.exclusions.size(), 1u);
  EXPECT_EQ(res.exclusions[0].coin, "B");
  EXPECT_EQ(res.exclusions[0].reason, Errc::insufficient_overlap);
  EXPECT_EQ(res.matrix.size(), 2u);
}

TEST(PearsonMatrix, UnusablePairResolvedByGreedyRemoval) {
  // A and B barely overlap each other but both overlap C enough, so the
  // lowest-index member of the failing pair is dropped.
  std::vector<std::vector<std::optional<double>>> rows{
      {0.01, 0.02, -0.01, std::nullopt, std::nullopt, 0.03},
      {std::nullopt, std::nullopt, -0.02, 0.01, 0.02, 0.01},
      {0.02, 0.01, -0.03, 0.015, 0.01, -0.02}};
  auto res = coinstats::pearson_matrix(make_panel({"A", "B", "C"}, rows));
  ASSERT_EQ(res.exclusions.size(), 1u);
  EXPECT_EQ(res.exclusions[0].coin, "A");
  EXPECT_EQ(res.exclusions[0].reason, Errc::insufficient_overlap);
  ASSERT_EQ(res.matrix.size(), 2u);
  EXPECT_EQ(res.matrix.coins, (std::vector<coinstats::CoinId>{"B", "C"}));
  res.matrix.validate();
}

TEST(PearsonMatrix, SupportCountsPairwiseOverlap) {
  std::vector<std::vector<std::optional<double>>> rows{
      {0.01, 0.02, -0.01, 0.03, std::nullopt, 0.05, 0.01, -0.04},
      {0.02, std::nullopt, -0.02, 0.01, 0.02, 0.01, std::nullopt, -0.01},
      {0.03, 0.01, -0.03, 0.02, 0.01, -0.02, 0.04, 0.02}};
  auto res = coinstats::pearson_matrix(make_panel({"A", "B", "C"}, rows));
  EXPECT_TRUE(res.exclusions.empty());
  EXPECT_EQ(res.matrix.support_at(0, 0), 7);  // A present 7 of 8
  EXPECT_EQ(res.matrix.support_at(1, 1), 6);
  EXPECT_EQ(res.matrix.support_at(2, 2), 8);
  EXPECT_EQ(res.matrix.support_at(0, 1), 5);  // both present
  EXPECT_EQ(res.matrix.support_at(0, 2), 7);
  EXPECT_EQ(res.matrix.support_at(1, 2), 6);
  EXPECT_EQ(res.matrix.support_at(1, 0), 5);
}

TEST(PearsonMatrix, RejectsDegenerateInputs) {
  auto one = make_panel({"A"}, std::vector<std::vector<double>>{{0.1, 0.2, 0.3}});
  EXPECT_EQ(code_of([&] { coinstats::pearson_matrix(one); }),
            Errc::too_few_coins);
}

TEST(PartialMatrix, RemovesSharedFactor) {
  testutil::Rng rng(18);
  auto p = testutil::anchored_panel(rng, 12, 250, 0.3, 1.5, 0.05, 0.03);
  auto pearson_res = coinstats::pearson_matrix(p);
  auto partial_res = coinstats::partial_matrix(p, "ANCHOR");
  EXPECT_TRUE(partial_res.exclusions.empty());
  ASSERT_EQ(partial_res.matrix.size(), 11u);
  partial_res.matrix.validate();
  EXPECT_EQ(partial_res.matrix.kind, CorrelationKind::partial);
  EXPECT_EQ(partial_res.matrix.anchor, "ANCHOR");

  // The anchor never appears among the partial matrix's coins.
  for (const auto& c : partial_res.matrix.coins) EXPECT_NE(c, "ANCHOR");

  // Mean absolute off-diagonal correlation collapses once the anchor's
  // influence is removed.
  auto mean_abs_offdiag = [](const coinstats::CorrelationMatrix& m,
                             const coinstats::CoinId& skip) {
    double sum = 0.0;
    int cnt = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = i + 1; j < m.size(); ++j) {
        if (m.coins[i] == skip || m.coins[j] == skip) continue;
        sum += std::fabs(m.value(i, j));
        ++cnt;
      }
    }
    return sum / cnt;
  };
  double before = mean_abs_offdiag(pearson_res.matrix, "ANCHOR");
  double after = mean_abs_offdiag(partial_res.matrix, "");
  EXPECT_GT(before, 0.5);
  EXPECT_LT(after, 0.15);
}

TEST(PartialMatrix, MatchesResidualRegressionOracle) {
  testutil::Rng rng(19);
  auto p = testutil::anchored_panel(rng, 8, 150, 0.3, 1.5, 0.05, 0.03);
  auto res = coinstats::partial_matrix(p, "ANCHOR");
  ASSERT_EQ(res.matrix.size(), 7u);
  std::vector<double> anchor_vals;
  for (size_t t = 0; t < p.cols(); ++t) anchor_vals.push_back(*p.cell(0, t));
  for (size_t i = 0; i < res.matrix.size(); ++i) {
    for (size_t j = i + 1; j < res.matrix.size(); ++j) {
      size_t ri = static_cast<size_t>(p.coin_index(res.matrix.coins[i]));
      size_t rj = static_cast<size_t>(p.coin_index(res.matrix.coins[j]));
      std::vector<double> xi, xj;
      for (size_t t = 0; t < p.cols(); ++t) {
        xi.push_back(*p.cell(ri, t));
        xj.push_back(*p.cell(rj, t));
      }
      EXPECT_NEAR(res.matrix.value(i, j),
                  oracle::partial_via_residuals(xi, xj, anchor_vals), 1e-8);
    }
  }
}

TEST(PartialMatrix, JointSupportKeepsResidualIdentityUnderMissingness) {
  // Punch holes in an anchored panel; the residual identity must still hold
  // on each pair's joint support with the anchor.
  testutil::Rng rng(20);
  auto p = testutil::anchored_panel(rng, 6, 200, 0.3, 1.5, 0.05, 0.03);
  for (size_t i = 1; i < p.rows(); ++i) {
    for (size_t t = 0; t < p.cols(); ++t) {
      if (rng.uniform01() < 0.15) p.cell(i, t) = std::nullopt;
    }
  }
  auto res = coinstats::partial_matrix(p, "ANCHOR");
  ASSERT_GE(res.matrix.size(), 2u);
  for (size_t i = 0; i < res.matrix.size(); ++i) {
    for (size_t j = i + 1; j < res.matrix.size(); ++j) {
      size_t ri = static_cast<size_t>(p.coin_index(res.matrix.coins[i]));
      size_t rj = static_cast<size_t>(p.coin_index(res.matrix.coins[j]));
      std::vector<double> xi, xj, xb;
      for (size_t t = 0; t < p.cols(); ++t) {
        if (p.cell(ri, t) && p.cell(rj, t) && p.cell(0, t)) {
          xi.push_back(*p.cell(ri, t));
          xj.push_back(*p.cell(rj, t));
          xb.push_back(*p.cell(0, t));
        }
      }
      EXPECT_EQ(res.matrix.support_at(i, j),
                static_cast<long long>(xi.size()));
      EXPECT_NEAR(res.matrix.value(i, j),
                  oracle::partial_via_residuals(xi, xj, xb), 1e-8);
    }
  }
}

TEST(PartialMatrix, IndependentRowsStayNearPearson) {
  testutil::Rng rng(21);
  std::vector<std::vector<double>> rows(5, std::vector<double>(200));
  for (auto& r : rows) {
    for (auto& v : r) v = rng.normal(0.0, 0.05);
  }
  auto p = make_panel({"B0", "C1", "C2", "C3", "C4"}, rows);
  auto pe = coinstats::pearson_matrix(p);
  auto pa = coinstats::partial_matrix(p, "B0");
  ASSERT_EQ(pa.matrix.size(), 4u);
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = i + 1; j < 4; ++j) {
      size_t pi = static_cast<size_t>(i + 1), pj = static_cast<size_t>(j + 1);
      EXPECT_NEAR(pa.matrix.value(i, j), pe.matrix.value(pi, pj), 0.2);
    }
  }
}

TEST(PartialMatrix, ExactMultiplesOfAnchorAllDegenerate) {
  std::vector<double> anchor{0.01, -0.02, 0.03, 0.005, -0.015, 0.02};
  std::vector<std::vector<double>> rows{anchor, anchor, anchor};
  for (auto& v : rows[1]) v *= 2.0;
  for (auto& v : rows[2]) v *= -0.5;
  auto p = make_panel({"B", "X", "Y"}, rows);
  auto res = coinstats::partial_matrix(p, "B");
  EXPECT_EQ(res.matrix.size(), 0u);
  ASSERT_EQ(res.exclusions.size(), 2u);
  for (const auto& e : res.exclusions) {
    EXPECT_EQ(e.reason, Errc::degenerate_anchor);
  }
}

TEST(PartialMatrix, AnchorMustBePresent) {
  auto p = make_panel({"A", "B", "C"},
                      std::vector<std::vector<double>>{
                          {0.01, -0.02, 0.03}, {0.02, 0.01, -0.01},
                          {0.01, 0.03, 0.02}});
  EXPECT_EQ(code_of([&] { coinstats::partial_matrix(p, "BTC"); }),
            Errc::anchor_missing);
}

TEST(PartialMatrix, NeedsTwoCoinsBesidesAnchor) {
  auto p = make_panel({"A", "B"}, std::vector<std::vector<double>>{
                                      {0.01, -0.02, 0.03}, {0.02, 0.01, -0.01}});
  EXPECT_EQ(code_of([&] { coinstats::partial_matrix(p, "A"); }),
            Errc::too_few_coins);
}

TEST(Distribution, MedianAndMoments) {
  auto s = coinstats::summarize_fixed_range({0.5, -0.5, 0.1}, 4, -1.0, 1.0);
  EXPECT_EQ(s.count, 3);
  EXPECT_DOUBLE_EQ(s.median, 0.1);
  auto m = oracle::moments_direct(std::vector<double>{0.5, -0.5, 0.1});
  EXPECT_NEAR(s.mean, m.mean, 1e-15);
  EXPECT_NEAR(s.stddev, m.stddev, 1e-15);

  auto even = coinstats::summarize_fixed_range({0.4, 0.1, -0.2, 0.3}, 4, -1.0,
                                               1.0);
  EXPECT_DOUBLE_EQ(even.median, 0.2);  // mean of 0.1 and 0.3
}

TEST(Distribution, HistogramInvariants) {
  testutil::Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    int bins = static_cast<int>(rng.integer(1, 80));
    size_t n = static_cast<size_t>(rng.integer(1, 500));
    std::vector<double> vals(n);
    for (auto& v : vals) v = rng.uniform(-1.0, 1.0);
    auto s = coinstats::summarize_fixed_range(vals, bins, -1.0, 1.0);
    long long total = 0;
    for (size_t b = 0; b < s.histogram.size(); ++b) {
      total += s.histogram[b].count;
      if (b > 0) {
        EXPECT_DOUBLE_EQ(s.histogram[b].lo, s.histogram[b - 1].hi);
      }
      EXPECT_LT(s.histogram[b].lo, s.histogram[b].hi);
    }
    EXPECT_EQ(total, static_cast<long long>(n));
    EXPECT_DOUBLE_EQ(s.histogram.front().lo, -1.0);
    EXPECT_DOUBLE_EQ(s.histogram.back().hi, 1.0);
  }
}

TEST(Distribution, UpperEndpointLandsInLastBin) {
  auto s = coinstats::summarize_fixed_range({1.0, -1.0}, 4, -1.0, 1.0);
  EXPECT_EQ(s.histogram.front().count, 1);
  EXPECT_EQ(s.histogram.back().count, 1);
}

TEST(AnchorDistribution, IdenticalCoinsPileAtOne) {
  std::vector<double> r{0.01, -0.02, 0.03, 0.005};
  auto p = make_panel({"B", "C1", "C2", "C3"},
                      std::vector<std::vector<double>>{r, r, r, r});
  auto s = coinstats::anchor_distribution(p, "B");
  EXPECT_EQ(s.count, 3);
  EXPECT_NEAR(s.median, 1.0, 1e-12);
  EXPECT_EQ(s.histogram.back().count, 3);  // bin closing at +1
}

TEST(AnchorDistribution, MirroredPairStraddlesZero) {
  std::vector<double> r{0.01, -0.02, 0.03, 0.005};
  std::vector<double> neg(r);
  for (auto& v : neg) v = -v;
  auto p = make_panel({"B", "UP", "DOWN"},
                      std::vector<std::vector<double>>{r, r, neg});
  auto s = coinstats::anchor_distribution(p, "B");
  EXPECT_EQ(s.count, 2);
  EXPECT_NEAR(s.median, 0.0, 1e-12);
  EXPECT_EQ(s.histogram.front().count, 1);
  EXPECT_EQ(s.histogram.back().count, 1);
}

TEST(AnchorDistribution, PositiveBetasGivePositiveMass) {
  testutil::Rng rng(23);
  auto p = testutil::anchored_panel(rng, 20, 150, 0.3, 1.5, 0.05, 0.03);
  auto s = coinstats::anchor_distribution(p, "ANCHOR");
  EXPECT_EQ(s.count, 19);
  long long negative_mass = 0;
  for (const auto& b : s.histogram) {
    if (b.hi <= 0.0) negative_mass += b.count;
  }
  EXPECT_EQ(negative_mass, 0);
  EXPECT_GT(s.median, 0.5);
}

TEST(AnchorDistribution, SkipsUncomputableCoins) {
  std::vector<std::vector<std::optional<double>>> rows{
      {0.01, -0.02, 0.03, 0.005},
      {0.02, 0.01, -0.01, 0.02},
      {0.007, 0.007, 0.007, 0.007},               // constant
      {0.01, std::nullopt, std::nullopt, std::nullopt}};  // 1 obs overlap
  auto p = make_panel({"B", "OK", "FLAT", "THIN"}, rows);
  auto s = coinstats::anchor_distribution(p, "B");
  EXPECT_EQ(s.count, 1);
  auto all_bad = make_panel(
      {"B", "FLAT"}, std::vector<std::vector<double>>{
                         {0.01, -0.02, 0.03}, {0.007, 0.007, 0.007}});
  EXPECT_EQ(code_of([&] { coinstats::anchor_distribution(all_bad, "B"); }),
            Errc::too_few_coins);
}

TEST(OffdiagonalDistribution, CountsEachPairOnce) {
  auto p2 = make_panel({"A", "B"}, std::vector<std::vector<double>>{
                                       {0.01, -0.02, 0.03, 0.01},
                                       {0.03, -0.01, 0.02, -0.02}});
  auto m2 = coinstats::pearson_matrix(p2).matrix;
  auto s2 = coinstats::offdiagonal_distribution(m2);
  EXPECT_EQ(s2.count, 1);
  EXPECT_NEAR(s2.median, m2.value(0, 1), 1e-15);

  std::vector<double> r{0.01, -0.02, 0.03, 0.005};
  auto p3 = make_panel({"A", "B", "C"},
                       std::vector<std::vector<double>>{r, r, r});
  auto m3 = coinstats::pearson_matrix(p3).matrix;
  auto s3 = coinstats::offdiagonal_distribution(m3);
  EXPECT_EQ(s3.count, 3);
  EXPECT_NEAR(s3.median, 1.0, 1e-12);
}

}  // namespace
