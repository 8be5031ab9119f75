#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chaospso/errors.hpp"
#include "chaospso/sequence_sources.hpp"
#include "chaospso/stats_compare.hpp"

using namespace chaospso;

namespace {

// Two-sided exact p by visiting every subset of ranks 1..N of size |a|.
double brute_exact_p(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  auto rank = [&](double v) { return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1; };
  int w = 0;
  for (double v : a) w += rank(v);
  const int n = static_cast<int>(pooled.size());
  const int n1 = static_cast<int>(a.size());
  long le = 0, ge = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != n1) continue;
    int s = 0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) s += i + 1;
    ++total;
    le += s <= w;
    ge += s >= w;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

// Friedman statistic for two treatments from within-block ranks, written as
// the general tie-corrected formula with k = 2.
double brute_friedman(const std::vector<double>& a, const std::vector<double>& b) {
  const double k = 2.0, n = static_cast<double>(a.size());
  double ra = 0.0, rb = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = 0.0, y = 0.0;
    for (double v : {a[i], b[i]}) {
      x += (v < a[i]) + 0.5 * (v == a[i]);
      y += (v < b[i]) + 0.5 * (v == b[i]);
    }
    x += 0.5;
    y += 0.5;
    ra += x;
    rb += y;
    sum_sq += x * x + y * y;
  }
  const double c = n * (k + 1.0) / 2.0;
  const double num = (k - 1.0) * ((ra - c) * (ra - c) + (rb - c) * (rb - c));
  const double den = sum_sq - n * k * (k + 1.0) * (k + 1.0) / 4.0;
  return den == 0.0 ? 0.0 : num / den;
}

}  // namespace

TEST(Wilcoxon, IdenticalSamples) {
  const std::vector<double> a{1, 2, 3};
  const auto r = wilcoxon_rank_sum(a, a);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(classify_pair(a, a, StatTest::Wilcoxon).outcome, Outcome::Indistinguishable);
}

TEST(Wilcoxon, CompleteSeparation) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{11, 12, 13, 14, 15};
  const auto r = wilcoxon_rank_sum(a, b);
  EXPECT_EQ(r.statistic, 15.0);
  EXPECT_NEAR(r.p_value, 2.0 / 252.0, 1e-15);
  EXPECT_NEAR(r.p_value, 0.00794, 1e-5);
}

TEST(Wilcoxon, ExactMatchesSubsetEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n1 = 1 + static_cast<int>(rng() % 10), n2 = 1 + static_cast<int>(rng() % 10);
    std::vector<double> a(static_cast<std::size_t>(n1)), b(static_cast<std::size_t>(n2));
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng) + 0.3;
    ASSERT_NEAR(wilcoxon_exact(a, b).p_value, brute_exact_p(a, b), 1e-12);
    ASSERT_EQ(wilcoxon_rank_sum(a, b).p_value, wilcoxon_exact(a, b).p_value);
  }
}

TEST(Wilcoxon, ApproximationTracksExactOnSmallSamples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n1 = 1 + static_cast<int>(rng() % 10), n2 = 1 + static_cast<int>(rng() % 10);
    std::vector<double> a(static_cast<std::size_t>(n1)), b(static_cast<std::size_t>(n2));
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    worst = std::max(worst, std::abs(wilcoxon_normal(a, b).p_value - brute_exact_p(a, b)));
  }
  EXPECT_LE(worst, 0.01);
}

TEST(Wilcoxon, NormalPathWithTies) {
  // Hand computation: pooled {1,1,2,3,3,3}, a = {1,3,3}: ranks 1.5, 5, 5 -> W = 11.5,
  // mu = 10.5, var = 9/12 * (7 - (6 + 24)/30) = 4.5.
  const std::vector<double> a{1, 3, 3}, b{1, 2, 3};
  const auto r = wilcoxon_rank_sum(a, b);
  EXPECT_EQ(r.statistic, 11.5);
  EXPECT_NEAR(r.p_value, std::erfc(0.5 / std::sqrt(4.5) / std::sqrt(2.0)), 1e-15);
  EXPECT_THROW(wilcoxon_exact(a, b), ValidationError);
}

TEST(Wilcoxon, LargeSampleSymmetry) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<double> a(300), b(250);
  for (auto& x : a) x = g(rng);
  for (auto& x : b) x = g(rng) + 0.2;
  const double p1 = wilcoxon_rank_sum(a, b).p_value, p2 = wilcoxon_rank_sum(b, a).p_value;
  EXPECT_NEAR(p1, p2, 1e-12);
  EXPECT_LT(p1, 0.05);
}

TEST(Wilcoxon, EmptySampleRejected) {
  const std::vector<double> a{1.0}, e;
  EXPECT_THROW(wilcoxon_rank_sum(a, e), ValidationError);
  EXPECT_THROW(wilcoxon_rank_sum(e, a), ValidationError);
}

TEST(Friedman, IdenticalBlocks) {
  const std::vector<double> a{0.1, 0.5, 2.0, 7.0};
  const auto r = friedman_two(a, a);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.statistic, 0.0);
}

TEST(Friedman, AllRowWinsIsSignificant) {
  std::vector<double> a(20), b(20);
  for (int i = 0; i < 20; ++i) {
    a[static_cast<std::size_t>(i)] = i;
    b[static_cast<std::size_t>(i)] = i + 0.5;
  }
  const auto r = friedman_two(a, b);
  EXPECT_EQ(r.statistic, 20.0);
  EXPECT_LT(r.p_value, 0.001);
  EXPECT_GT(r.p_value, 2.0 * std::pow(0.5, 20));
  EXPECT_EQ(classify_pair(a, b, StatTest::Friedman).outcome, Outcome::RowBetter);
  EXPECT_EQ(classify_pair(b, a, StatTest::Friedman).outcome, Outcome::ColBetter);
}

TEST(Friedman, MatchesRankComputation) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng() % 5);
      b[i] = static_cast<double>(rng() % 5);
    }
    ASSERT_NEAR(friedman_two(a, b).statistic, brute_friedman(a, b), 1e-10);
  }
}

TEST(Friedman, UnequalLengthsRejected) {
  const std::vector<double> a{1, 2, 3}, b{1, 2};
  EXPECT_THROW(friedman_two(a, b), ValidationError);
}

TEST(ClassifyPair, DisjointSupportsAndTransposition) {
  std::vector<double> a(40), b(40);
  for (int i = 0; i < 40; ++i) {
    a[static_cast<std::size_t>(i)] = 0.01 * i;
    b[static_cast<std::size_t>(i)] = 10.0 + 0.01 * ((i * 7) % 40);
  }
  for (StatTest t : {StatTest::Wilcoxon, StatTest::Friedman}) {
    EXPECT_EQ(classify_pair(a, b, t).outcome, Outcome::RowBetter);
    EXPECT_EQ(classify_pair(b, a, t).outcome, Outcome::ColBetter);
    EXPECT_EQ(classify_pair(a, a, t).outcome, Outcome::Indistinguishable);
  }
}

TEST(ClassifyPair, EqualMediansAreTies) {
  // Row wins 18 of 19 blocks, yet both medians are 5.
  std::vector<double> a, b;
  for (int i = 0; i < 9; ++i) {
    a.push_back(0.0);
    b.push_back(1.0);
    a.push_back(10.0);
    b.push_back(11.0);
  }
  a.push_back(5.0);
  b.push_back(5.0);
  ASSERT_LT(friedman_two(a, b).p_value, 0.05);
  ASSERT_EQ(median(a), median(b));
  EXPECT_EQ(classify_pair(a, b, StatTest::Friedman).outcome, Outcome::Indistinguishable);
  EXPECT_EQ(median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_EQ(median(std::vector<double>{4, 1, 2, 3}), 2.5);
}

TEST(TieFraction, Examples) {
  EXPECT_EQ(tie_fraction({0, 0, 27}), 1.0);
  EXPECT_NEAR(tie_fraction({6, 5, 16}), 16.0 / 27.0, 1e-15);
  EXPECT_NEAR(tie_fraction({6, 5, 16}), 0.593, 5e-4);
  EXPECT_EQ(tie_fraction({20, 7, 0}), 0.0);
}

TEST(ComparisonMatrix, CountsSymmetryAggregates) {
  const auto& ids = source_ids();
  std::vector<int> fns;
  for (int f = 1; f <= 27; ++f) fns.push_back(f);
  ErrorTable table;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t s = 0; s < ids.size(); ++s)
    for (int f : fns) {
      std::vector<double> v(30);
      const double shift = (s % 3 == 0 && f % 2 == 0) ? 1.0 : 0.0;
      for (auto& x : v) x = u(rng) + shift;
      table[{ids[s], f}] = v;
    }
  const auto m = comparison_matrix(table, ids, fns);
  for (StatTest t : {StatTest::Wilcoxon, StatTest::Friedman})
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j) {
        if (i == j) continue;
        EXPECT_EQ(m.cell(t, i, j).total(), 27);
        EXPECT_EQ(m.cell(t, j, i), m.cell(t, i, j).transposed());
      }
  for (const auto& agg : m.aggregates)
    for (std::size_t t = 0; t < 2; ++t) {
      EXPECT_EQ(agg.opposite[t].total(), 162);
      EXPECT_EQ(agg.same[t].total(), 135);
    }
  // Source 0 is shifted up on even functions against sources 1, 2: it loses there.
  EXPECT_GT(m.cell(StatTest::Wilcoxon, 0, 1).minus, 8);
}

TEST(ComparisonMatrix, GapsAreListed) {
  ErrorTable table;
  table[{"logistic", 1}] = {0.1, 0.2};
  table[{"tent", 1}] = {0.1};
  try {
    comparison_matrix(table, {"logistic", "tent", "cubic"}, {1});
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(cubic, 1)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("tent, 1: 1 runs"), std::string::npos) << msg;
  }
}
