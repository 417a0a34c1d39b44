#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "recip/reciprocity_map.hpp"

using namespace recip;

namespace {

DegreeSummary deg(std::uint64_t m, std::uint64_t i, std::uint64_t o) { return {UserId{1}, i, o, m}; }

// Random summary respecting k_m <= min(k_i, k_o).
DegreeSummary random_summary(std::mt19937_64& rng) {
  const std::uint64_t i = rng() % 5000, o = rng() % 5000;
  const std::uint64_t m = std::min(i, o) == 0 ? 0 : rng() % (std::min(i, o) + 1);
  return deg(m, i, o);
}

double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

TEST(Reciprocity, IsolatedUserSitsAtOneOne) {
  const auto p = compute_reciprocity(deg(0, 0, 0));
  EXPECT_EQ(p.r_in, 1.0);
  EXPECT_EQ(p.r_out, 1.0);
}

TEST(Reciprocity, DirectSubstitution) {
  const auto p = compute_reciprocity(deg(3, 7, 3));
  EXPECT_EQ(p.r_in, 0.5);
  EXPECT_EQ(p.r_out, 1.0);
  const auto q = compute_reciprocity(deg(100, 100, 100));
  EXPECT_EQ(q.r_in, 1.0);
  EXPECT_EQ(q.r_out, 1.0);
}

TEST(FolloweeFollowerRatio, Examples) {
  EXPECT_EQ(followee_follower_ratio(deg(0, 0, 0)), 1.0);
  EXPECT_EQ(followee_follower_ratio(deg(0, 9, 4)), 0.5);
}

TEST(FolloweeFollowerRatio, EqualsRatioOfCoordinates) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto d = random_summary(rng);
    const auto p = compute_reciprocity(d);
    EXPECT_NEAR(followee_follower_ratio(d), p.r_in / p.r_out, 1e-12);
    EXPECT_GT(p.r_in, 0.0);
    EXPECT_LE(p.r_in, 1.0);
    EXPECT_EQ(p.r_in == 1.0, d.k_mutual == d.k_in);
    EXPECT_EQ(p.r_out == 1.0, d.k_mutual == d.k_out);
  }
}

TEST(Classify, Corners) {
  EXPECT_EQ(classify_archetype({0.2, 0.8}), Archetype::Feeding);
  EXPECT_EQ(classify_archetype({0.8, 0.2}), Archetype::Accumulating);
  EXPECT_EQ(classify_archetype({0.2, 0.2}), Archetype::Flowing);
  EXPECT_EQ(classify_archetype({0.8, 0.8}), Archetype::Circulating);
  EXPECT_EQ(classify_archetype({0.5, 0.5}), Archetype::Intermediate);
}

TEST(Classify, BoundariesAreInclusive) {
  EXPECT_EQ(classify_archetype({0.25, 0.75}), Archetype::Feeding);
  EXPECT_EQ(classify_archetype({0.75, 0.25}), Archetype::Accumulating);
  EXPECT_EQ(classify_archetype({0.25, 0.25}), Archetype::Flowing);
  EXPECT_EQ(classify_archetype({0.75, 0.75}), Archetype::Circulating);
  EXPECT_EQ(classify_archetype({0.2500001, 0.75}), Archetype::Intermediate);
}

TEST(Classify, CustomThresholds) {
  ClassifierConfig cfg{0.1, 0.9};
  EXPECT_EQ(classify_archetype({0.2, 0.8}, cfg), Archetype::Intermediate);
  EXPECT_EQ(classify_archetype({0.1, 0.9}, cfg), Archetype::Feeding);
  EXPECT_THROW((ClassifierConfig{0.5, 0.5}.validate()), InvalidArgument);
  EXPECT_THROW((ClassifierConfig{0.0, 0.5}.validate()), InvalidArgument);
  EXPECT_THROW((ClassifierConfig{0.3, 1.0}.validate()), InvalidArgument);
}

TEST(Classify, LabelNamesRoundTrip) {
  for (auto a : kAllArchetypes) EXPECT_EQ(parse_archetype(to_string(a)), a);
  EXPECT_FALSE(parse_archetype("feeding").has_value());
}

TEST(Grid, Binning) {
  EXPECT_EQ(bin_to_grid({1.0, 1.0}, 10), (GridCell{9, 9}));
  EXPECT_EQ(bin_to_grid({0.55, 0.71}, 10), (GridCell{7, 5}));
  EXPECT_EQ(bin_to_grid({0.1, 0.1}, 10), (GridCell{1, 1}));
  EXPECT_EQ(bin_to_grid({0.01, 0.99}, 4), (GridCell{3, 0}));
  EXPECT_THROW(bin_to_grid({0.5, 0.5}, 0), InvalidArgument);
}

TEST(Grid, OddAndEvenMedians) {
  const std::vector<GridSample> odd{{{0.51, 0.51}, 1.0}, {{0.52, 0.52}, 2.0}, {{0.53, 0.53}, 9.0}};
  EXPECT_EQ(grid_aggregate(odd, 10, GridStatistic::Median).at(5, 5).value, 2.0);
  const std::vector<GridSample> even{{{0.51, 0.51}, 1.0}, {{0.52, 0.52}, 3.0}};
  EXPECT_EQ(grid_aggregate(even, 10, GridStatistic::Median).at(5, 5).value, 2.0);
}

TEST(Grid, MissingValuesCountButDoNotVote) {
  const std::vector<GridSample> s{{{0.05, 0.05}, std::nullopt}, {{0.06, 0.06}, 4.0}, {{0.95, 0.95}, std::nullopt}};
  const auto g = grid_aggregate(s, 10, GridStatistic::Median);
  EXPECT_EQ(g.at(0, 0).count, 2u);
  EXPECT_EQ(g.at(0, 0).value, 4.0);
  EXPECT_EQ(g.at(9, 9).count, 1u);
  EXPECT_FALSE(g.at(9, 9).value.has_value());
  EXPECT_FALSE(g.at(3, 4).value.has_value());
}

TEST(Grid, MediansMatchSortOracle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GridSample> samples;
  std::vector<std::vector<double>> by_cell(64);
  for (int i = 0; i < 5000; ++i) {
    const ReciprocityPoint p{1.0 - unit(rng), 1.0 - unit(rng)};
    const double v = std::floor(unit(rng) * 50);  // many ties
    samples.push_back({p, v});
    const auto c = bin_to_grid(p, 8);
    by_cell[c.row * 8 + c.col].push_back(v);
  }
  const auto g = grid_aggregate(samples, 8, GridStatistic::Median);
  EXPECT_EQ(g.total_count(), samples.size());
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      const auto& vals = by_cell[r * 8 + c];
      ASSERT_EQ(g.at(r, c).count, vals.size());
      if (!vals.empty()) {
        EXPECT_EQ(*g.at(r, c).value, sorted_median(vals));
      }
    }
}

TEST(Density, IdenticalPointsShareOneCell) {
  const std::vector<ReciprocityPoint> pts(100, ReciprocityPoint{0.33, 0.66});
  const auto g = density_map(pts, 10);
  std::size_t nonzero = 0;
  for (const auto& c : g.cells()) nonzero += c.count > 0;
  EXPECT_EQ(nonzero, 1u);
  EXPECT_EQ(g.at(6, 3).count, 100u);
  EXPECT_EQ(g.at(6, 3).value, 100.0);
}

TEST(Density, FourCornerRegionsGiveFourCells) {
  std::vector<ReciprocityPoint> pts;
  for (int i = 0; i < 25; ++i) {
    const double lo = 0.01 + 0.003 * i, hi = 0.91 + 0.003 * i;
    pts.insert(pts.end(), {{lo, hi}, {hi, lo}, {lo, lo}, {hi, hi}});
  }
  const auto g = density_map(pts, 10);
  std::size_t nonzero = 0;
  for (const auto& c : g.cells()) nonzero += c.count > 0;
  EXPECT_EQ(nonzero, 4u);
  EXPECT_EQ(g.total_count(), 100u);
}
