#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "recip/stats_tests.hpp"

using namespace recip;

namespace {

std::vector<SampleGroup> groups_123() { return {{"a", {1, 2, 3}}, {"b", {4, 5, 6}}, {"c", {7, 8, 9}}}; }

// H from the plain rank-sum form, valid when there are no ties.
double h_no_ties(const std::vector<SampleGroup>& g) {
  std::vector<double> all;
  for (const auto& x : g) all.insert(all.end(), x.values.begin(), x.values.end());
  std::sort(all.begin(), all.end());
  const double n = static_cast<double>(all.size());
  double sum = 0;
  for (const auto& x : g) {
    double r = 0;
    for (double v : x.values) r += static_cast<double>(std::lower_bound(all.begin(), all.end(), v) - all.begin()) + 1;
    const double mean = r / static_cast<double>(x.values.size());
    sum += static_cast<double>(x.values.size()) * (mean - (n + 1) / 2) * (mean - (n + 1) / 2);
  }
  return 12.0 / (n * (n + 1)) * sum;
}

std::vector<SampleGroup> random_groups(std::mt19937_64& rng, bool ties) {
  std::vector<SampleGroup> g(2 + rng() % 4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i].label = "g" + std::to_string(i);
    const std::size_t n = 2 + rng() % 12;
    for (std::size_t j = 0; j < n; ++j)
      g[i].values.push_back(ties ? static_cast<double>(rng() % 6) : std::ldexp(static_cast<double>(rng() >> 11), -53) + i * 0.1);
  }
  return g;
}

}  // namespace

TEST(Tails, ChiSquareDfTwoIsExponential) {
  for (double x : {0.1, 1.0, 3.7, 10.0, 25.0}) EXPECT_NEAR(chi_square_upper_tail(x, 2), std::exp(-x / 2), 1e-14);
  EXPECT_EQ(chi_square_upper_tail(0, 3), 1.0);
  EXPECT_THROW(chi_square_upper_tail(1, 0), InvalidArgument);
}

TEST(Tails, StudentDfOneIsCauchy) {
  for (double t : {0.2, 1.0, 2.5, 40.0}) {
    const double want = 1.0 - 2.0 * std::atan(t) / std::numbers::pi;
    EXPECT_NEAR(student_t_two_sided(t, 1), want, 1e-13);
    EXPECT_NEAR(student_t_two_sided(-t, 1), want, 1e-13);
  }
  EXPECT_EQ(student_t_two_sided(0, 5), 1.0);
}

TEST(Midranks, TiesShareMean) {
  const std::vector<double> v{3, 1, 3, 2, 3};
  const auto r = midranks(v);
  EXPECT_EQ(r.ranks, (std::vector<double>{4, 1, 4, 2, 4}));
  EXPECT_EQ(r.tie_sum, 24.0);
}

TEST(KruskalWallis, ThreeSeparatedGroups) {
  const auto r = kruskal_wallis(groups_123());
  EXPECT_NEAR(r.h_statistic, 7.2, 1e-9);
  EXPECT_EQ(r.degrees_of_freedom, 2);
  EXPECT_NEAR(r.p_value, std::exp(-3.6), 1e-12);
  EXPECT_EQ(r.n_total, 9u);
}

TEST(KruskalWallis, IdenticalGroupsWithTies) {
  const std::vector<SampleGroup> g{{"a", {1, 2}}, {"b", {1, 2}}};
  const auto r = kruskal_wallis(g);
  EXPECT_NEAR(r.h_statistic, 0.0, 1e-12);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(KruskalWallis, MatchesRankSumOracleWithoutTies) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_groups(rng, false);
    EXPECT_NEAR(kruskal_wallis(g).h_statistic, h_no_ties(g), 1e-9);
  }
}

TEST(KruskalWallis, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_groups(rng, i % 2 == 0);
    auto shifted = g, warped = g;
    for (auto& x : shifted)
      for (auto& v : x.values) v += 1000.0;
    for (auto& x : warped)
      for (auto& v : x.values) v = std::exp(v) * 3.0 - 7.0;
    const double h = kruskal_wallis(g).h_statistic;
    EXPECT_NEAR(kruskal_wallis(shifted).h_statistic, h, 1e-9);
    EXPECT_NEAR(kruskal_wallis(warped).h_statistic, h, 1e-9);
  }
}

TEST(KruskalWallis, DegenerateInputs) {
  EXPECT_THROW(kruskal_wallis(std::vector<SampleGroup>{{"a", {1, 2}}}), InvalidArgument);
  EXPECT_THROW(kruskal_wallis(std::vector<SampleGroup>{{"a", {1, 2}}, {"b", {}}}), InvalidArgument);
  EXPECT_THROW(kruskal_wallis(std::vector<SampleGroup>{{"a", {4, 4}}, {"b", {4}}}), DataError);
}

TEST(Conover, OuterPairIsStrongest) {
  const auto g = groups_123();
  const auto pairs = conover_pairwise(g, kruskal_wallis(g));
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].first, "a");
  EXPECT_EQ(pairs[0].second, "b");
  EXPECT_EQ(pairs[1].second, "c");
  EXPECT_GT(std::abs(pairs[1].t_statistic), std::abs(pairs[0].t_statistic));
  EXPECT_LT(pairs[1].p_raw, pairs[0].p_raw);
  EXPECT_FALSE(pairs[0].p_adjusted.has_value());
}

TEST(Conover, DirectFormula) {
  // N = 9, k = 3, no ties: S^2 = 7.5, H = 7.2, mean ranks 2, 5, 8.
  const auto g = groups_123();
  const auto pairs = conover_pairwise(g, kruskal_wallis(g));
  const double scale = 7.5 * (9.0 - 1.0 - 7.2) / (9.0 - 3.0);
  const double t = (2.0 - 5.0) / std::sqrt(scale * (1.0 / 3 + 1.0 / 3));
  EXPECT_NEAR(pairs[0].t_statistic, t, 1e-12);
  EXPECT_NEAR(pairs[0].p_raw, student_t_two_sided(t, 6), 1e-15);
}

TEST(Conover, IdenticalGroupsGiveZero) {
  const std::vector<SampleGroup> g{{"a", {1, 5, 9}}, {"b", {1, 5, 9}}, {"c", {2, 3, 4}}};
  const auto pairs = conover_pairwise(g, kruskal_wallis(g));
  EXPECT_EQ(pairs[0].t_statistic, 0.0);
  EXPECT_EQ(pairs[0].p_raw, 1.0);
}

TEST(Conover, GroupOrderEquivariance) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    auto g = random_groups(rng, true);
    if (g.size() < 3) continue;
    const auto a = conover_pairwise(g, kruskal_wallis(g));
    std::swap(g.front(), g.back());
    const auto b = conover_pairwise(g, kruskal_wallis(g));
    for (const auto& x : a) {
      const auto it = std::find_if(b.begin(), b.end(), [&](const PairwiseResult& y) {
        return (y.first == x.first && y.second == x.second) || (y.first == x.second && y.second == x.first);
      });
      ASSERT_NE(it, b.end());
      const double sign = it->first == x.first ? 1.0 : -1.0;
      EXPECT_NEAR(it->t_statistic, sign * x.t_statistic, 1e-9);
      EXPECT_NEAR(it->p_raw, x.p_raw, 1e-12);
    }
  }
}

TEST(Holm, HandStepDown) {
  const auto adj = holm_adjust(std::vector<double>{0.01, 0.04, 0.03});
  ASSERT_EQ(adj.size(), 3u);
  EXPECT_NEAR(adj[0], 0.03, 1e-15);
  EXPECT_NEAR(adj[1], 0.06, 1e-15);
  EXPECT_NEAR(adj[2], 0.06, 1e-15);
}

TEST(Holm, EdgeCases) {
  EXPECT_EQ(holm_adjust(std::vector<double>{0.5}), (std::vector<double>{0.5}));
  EXPECT_EQ(holm_adjust(std::vector<double>{0, 0, 0}), (std::vector<double>{0, 0, 0}));
  EXPECT_TRUE(holm_adjust(std::vector<double>{}).empty());
  EXPECT_EQ(holm_adjust(std::vector<double>{0.6, 0.7}), (std::vector<double>{1, 1}));
  EXPECT_THROW(holm_adjust(std::vector<double>{1.5}), InvalidArgument);
}

TEST(Holm, DominatesRawAndStaysMonotone) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> p(1 + rng() % 12);
    for (auto& x : p) x = unit(rng) * unit(rng);
    const auto adj = holm_adjust(p);
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    for (std::size_t j = 0; j < p.size(); ++j) {
      EXPECT_GE(adj[j], p[j]);
      EXPECT_LE(adj[j], 1.0);
      if (j) {
        EXPECT_GE(adj[order[j]], adj[order[j - 1]]);
      }
    }
  }
}

TEST(Holm, AppliedAcrossFamily) {
  const auto g = groups_123();
  auto pairs = conover_pairwise(g, kruskal_wallis(g));
  apply_holm(pairs);
  for (const auto& p : pairs) {
    ASSERT_TRUE(p.p_adjusted);
    EXPECT_GE(*p.p_adjusted, p.p_raw);
  }
}

TEST(LetterValues, EightPointsTwoLevels) {
  std::vector<double> x{8, 7, 6, 5, 4, 3, 2, 1};
  LetterValueOptions opts;
  opts.max_depth = 2;
  const auto s = letter_values(x, opts);
  ASSERT_EQ(s.levels.size(), 2u);
  EXPECT_EQ(s.levels[0].label, "M");
  EXPECT_EQ(s.levels[0].lower, 4.5);
  EXPECT_EQ(s.levels[0].upper, 4.5);
  EXPECT_EQ(s.levels[1].label, "F");
  EXPECT_EQ(s.levels[1].depth, 2.5);
  EXPECT_EQ(s.levels[1].lower, 2.5);
  EXPECT_EQ(s.levels[1].upper, 6.5);
}

TEST(LetterValues, OddSampleMedian) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto s = letter_values(x);
  EXPECT_EQ(s.levels[0].lower, 5.0);
  EXPECT_EQ(s.levels[0].upper, 5.0);
}

TEST(LetterValues, ConstantSample) {
  const std::vector<double> x(200, 3.25);
  for (const auto& lv : letter_values(x).levels) {
    EXPECT_EQ(lv.lower, 3.25);
    EXPECT_EQ(lv.upper, 3.25);
  }
}

TEST(LetterValues, DepthRuleAndStop) {
  std::vector<double> x(1000);
  std::iota(x.begin(), x.end(), 1.0);
  const auto s = letter_values(x);
  // Depths 500.5, 250.5, 125.5, 63, 32, 16.5, 8.5; next floor(4.5) < 8 stops.
  ASSERT_EQ(s.levels.size(), 7u);
  EXPECT_EQ(s.levels[3].depth, 63.0);
  EXPECT_EQ(s.levels[6].depth, 8.5);
  EXPECT_EQ(s.levels[6].label, "A");  // M F E D C B A
  for (std::size_t i = 1; i < s.levels.size(); ++i) {
    EXPECT_LE(s.levels[i].lower, s.levels[i - 1].lower);
    EXPECT_GE(s.levels[i].upper, s.levels[i - 1].upper);
  }
}

TEST(LetterValues, Errors) {
  EXPECT_THROW(letter_values(std::vector<double>{}), InvalidArgument);
  LetterValueOptions zero;
  zero.max_depth = 0;
  EXPECT_THROW(letter_values(std::vector<double>{1.0}, zero), InvalidArgument);
}
