#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rlj/sets.hpp"

using namespace rlj;

namespace {

FiniteGapSet set(std::vector<Interval> b, double r = 10.0) { return {std::move(b), r}; }

double brute_dist(double x, const FiniteGapSet& k) {
  double d = 1e300;
  for (const auto& b : k.bands()) d = std::min(d, x < b.lo ? b.lo - x : (x > b.hi ? x - b.hi : 0.0));
  return d;
}

// sup over a grid of mesh h of both sets
double brute_hausdorff(const FiniteGapSet& k1, const FiniteGapSet& k2, double h) {
  auto one = [&](const FiniteGapSet& from, const FiniteGapSet& to) {
    double s = 0.0;
    for (const auto& b : from.bands()) {
      const int n = std::max(1, static_cast<int>(std::ceil(b.length() / h)));
      for (int i = 0; i <= n; ++i) s = std::max(s, brute_dist(b.lo + b.length() * i / n, to));
    }
    return s;
  };
  return std::max(one(k1, k2), one(k2, k1));
}

// counts grid cells whose midpoints lie in exactly one set
double grid_symmdiff(const FiniteGapSet& k1, const FiniteGapSet& k2, double lo, double hi, double h) {
  const long n = static_cast<long>(std::ceil((hi - lo) / h));
  long c = 0;
  for (long i = 0; i < n; ++i) {
    const double x = lo + (i + 0.5) * h;
    if (k1.contains(x) != k2.contains(x)) ++c;
  }
  return c * h;
}

FiniteGapSet random_set(std::mt19937_64& rng, double r = 5.0) {
  std::uniform_int_distribution<int> nb(1, 4);
  std::uniform_real_distribution<double> u(-r + 0.5, r - 0.5);
  for (;;) {
    const int n = nb(rng);
    std::vector<double> pts;
    for (int i = 0; i < 2 * n; ++i) pts.push_back(u(rng));
    std::sort(pts.begin(), pts.end());
    std::vector<Interval> bands;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      bands.push_back({pts[2 * i], pts[2 * i + 1]});
      if (i > 0 && pts[2 * i] - pts[2 * i - 1] < 1e-6) ok = false;
    }
    if (ok) return {bands, r};
  }
}

}  // namespace

TEST(Gaps, SingleIntervalHasNone) { EXPECT_TRUE(gaps(set({{-2, 2}}, 3)).empty()); }

TEST(Gaps, TwoBands) {
  auto g = gaps(set({{-2, -1}, {1, 2}}, 3));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0], (Interval{-1, 1}));
}

TEST(Gaps, ThreeBands) {
  auto g = gaps(set({{0, 1}, {2, 3}, {4, 5}}));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], (Interval{1, 2}));
  EXPECT_EQ(g[1], (Interval{3, 4}));
}

TEST(Hausdorff, SelfDistanceIsZero) {
  auto k = set({{0, 1}, {2, 3}});
  EXPECT_EQ(hausdorff(k, k), 0.0);
}

TEST(Hausdorff, ExtraBandAgainstBruteForce) {
  auto k1 = set({{0, 1}});
  auto k2 = set({{0, 1}, {2, 3}});
  const double oracle = brute_hausdorff(k1, k2, 1e-4);
  EXPECT_NEAR(oracle, 2.0, 1e-12);
  EXPECT_NEAR(hausdorff(k1, k2), oracle, 1e-12);
}

TEST(Hausdorff, ShiftedIntervalAgainstBruteForce) {
  auto k1 = set({{0, 1}});
  auto k2 = set({{0.5, 1.5}});
  const double oracle = brute_hausdorff(k1, k2, 1e-4);
  EXPECT_NEAR(oracle, 0.5, 1e-12);
  EXPECT_NEAR(hausdorff(k1, k2), oracle, 1e-12);
}

TEST(Hausdorff, GapMidpointIsACandidate) {
  // the farthest point of [0, 10] from {[0,1],[9,10]} is the gap midpoint 5
  auto k1 = set({{0, 10}}, 11);
  auto k2 = set({{0, 1}, {9, 10}}, 11);
  EXPECT_NEAR(hausdorff(k1, k2), 4.0, 1e-14);
  EXPECT_NEAR(brute_hausdorff(k1, k2, 1e-3), 4.0, 1e-9);
}

TEST(Hausdorff, RandomSetsAgainstBruteForce) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto k1 = random_set(rng), k2 = random_set(rng);
    EXPECT_NEAR(hausdorff(k1, k2), brute_hausdorff(k1, k2, 1e-4), 1e-4);
  }
}

TEST(Symmdiff, SelfIsZero) {
  auto k = set({{0, 1}, {2, 3}});
  EXPECT_EQ(lebesgue_symmdiff(k, k), 0.0);
}

TEST(Symmdiff, OverlappingIntervalsAgainstGridCount) {
  auto k1 = set({{0, 2}}), k2 = set({{1, 3}});
  const double oracle = grid_symmdiff(k1, k2, -1, 4, 1e-5);
  EXPECT_NEAR(oracle, 2.0, 1e-4);
  EXPECT_NEAR(lebesgue_symmdiff(k1, k2), 2.0, 1e-14);
}

TEST(Symmdiff, DisjointExtraBand) {
  EXPECT_NEAR(lebesgue_symmdiff(set({{0, 1}}), set({{0, 1}, {5, 6}})), 1.0, 1e-14);
}

TEST(Symmdiff, RandomSetsAgainstGridCount) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    auto k1 = random_set(rng), k2 = random_set(rng);
    EXPECT_NEAR(lebesgue_symmdiff(k1, k2), grid_symmdiff(k1, k2, -5, 5, 1e-5), 1e-4);
  }
}

TEST(Delta, Examples) {
  auto k = set({{0, 1}, {3, 4}});
  EXPECT_EQ(delta_metric(k, k), 0.0);
  auto a = set({{0, 1}}), b = set({{0, 2}}), c = set({{0.5, 1.5}});
  EXPECT_NEAR(delta_metric(a, b), brute_hausdorff(a, b, 1e-4) + grid_symmdiff(a, b, -1, 3, 1e-5), 1e-4);
  EXPECT_NEAR(delta_metric(a, b), 2.0, 1e-14);
  EXPECT_NEAR(delta_metric(a, c), 1.5, 1e-14);
}

TEST(MetricProperties, RandomTriples) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    auto a = random_set(rng), b = random_set(rng), c = random_set(rng);
    for (auto* d : {&hausdorff, &delta_metric}) {
      EXPECT_EQ((*d)(a, a), 0.0);
      EXPECT_NEAR((*d)(a, b), (*d)(b, a), 1e-12);
      EXPECT_LE((*d)(a, c), (*d)(a, b) + (*d)(b, c) + 1e-12);
      if (!(a == b)) {
        EXPECT_GT((*d)(a, b), 0.0);
      }
    }
    EXPECT_GE(delta_metric(a, b), hausdorff(a, b));
    EXPECT_EQ(gaps(a).size(), a.band_count() - 1);
  }
}

TEST(Validation, RejectsBadSets) {
  EXPECT_THROW(set({}), ValidationError);
  EXPECT_THROW(set({{1, 0}}), ValidationError);
  EXPECT_THROW(set({{0, 1}, {0.5, 2}}), ValidationError);
  EXPECT_THROW(set({{0, 1}, {1 + 1e-10, 2}}), ValidationError);
  EXPECT_THROW(set({{2, 3}, {0, 1}}), ValidationError);
  EXPECT_THROW(set({{-3, 1}}, 3), ValidationError);
  EXPECT_NO_THROW(set({{0, 1}, {1 + 1e-8, 2}}));
}

TEST(Shift, MovesBandsAndGrowsRadius) {
  auto k = set({{-2, 2}}, 3).shifted(0.5);
  EXPECT_EQ(k.bands()[0], (Interval{-1.5, 2.5}));
  EXPECT_EQ(k.radius(), 3.5);
}
