#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rlj/approx.hpp"

using namespace rlj;
using oracle::cd;

namespace {

const FiniteGapSet kOneGap({{-2, -1}, {1, 2}}, 3);
const FiniteGapSet kUnitGap({{-1, 0}, {1, 2}}, 3);

// xi = 1 / 1/2 / 0 around K = [-1,0] u [1,2] with the given pieces on the gap (0, 1)
KreinFunction unit_gap_xi(std::vector<XiPiece> gap) {
  std::vector<XiPiece> p{{-3, -1, 1}, {-1, 0, 0.5}};
  p.insert(p.end(), gap.begin(), gap.end());
  p.push_back({1, 2, 0.5});
  p.push_back({2, 3, 0});
  return KreinFunction::from_pieces(3, p);
}

KreinFunction one_gap_xi(double mu) {
  if (mu >= 1.0) return KreinFunction::from_pieces(3, {{-3, -2, 1}, {-2, -1, 0.5}, {-1, 1, 0}, {1, 2, 0.5}, {2, 3, 0}});
  return KreinFunction::from_pieces(3, {{-3, -2, 1}, {-2, -1, 0.5}, {-1, mu, 0}, {mu, 1, 1}, {1, 2, 0.5}, {2, 3, 0}});
}

// random step function on each gap of b, 1/2 on b
KreinFunction random_gap_xi(const FiniteGapSet& b, std::mt19937_64& rng, int pieces) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<XiPiece> p{{-b.radius(), b.min(), 1}};
  const auto gs = b.gaps();
  for (std::size_t i = 0; i < b.bands().size(); ++i) {
    p.push_back({b.bands()[i].lo, b.bands()[i].hi, 0.5});
    if (i < gs.size()) {
      std::vector<double> cuts{gs[i].lo, gs[i].hi};
      for (int k = 1; k < pieces; ++k) cuts.push_back(gs[i].lo + gs[i].length() * u(rng));
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if (cuts[k + 1] > cuts[k]) p.push_back({cuts[k], cuts[k + 1], u(rng)});
    }
  }
  p.push_back({b.max(), b.radius(), 0});
  return KreinFunction::from_pieces(b.radius(), p);
}

double gap_integral(const KreinFunction& xi, const Interval& g) { return xi.integral(g.lo, g.hi); }

}  // namespace

TEST(Subdivide, Examples) {
  auto an = subdivide(kUnitGap, {2, 0.01});
  ASSERT_EQ(an.bands().size(), 3u);
  EXPECT_NEAR(an.bands()[1].lo, 0.495, 1e-15);
  EXPECT_NEAR(an.bands()[1].hi, 0.505, 1e-15);
  EXPECT_EQ(subdivide(kUnitGap, {1, 0.01}), kUnitGap);
  FiniteGapSet two({{-2.5, -2}, {-1, 0}, {1, 2}}, 3);
  auto a5 = subdivide(two, {5, 1e-3});
  EXPECT_NEAR(lebesgue_symmdiff(a5, two), 2 * 4 * 1e-3, 1e-14);
  for (const auto& g : a5.gaps()) EXPECT_GT(g.length(), 0.1);
  EXPECT_THROW(subdivide(kUnitGap, {3, 0.6}), ValidationError);
}

TEST(AveragedXi, Examples) {
  auto half = averaged_xi(unit_gap_xi({{0, 1, 0.5}}), kUnitGap);
  EXPECT_EQ(atom_positions(half.xi), std::vector<double>{0.5});
  auto step = averaged_xi(unit_gap_xi({{0, 0.4, 0}, {0.4, 1, 1}}), kUnitGap);
  EXPECT_EQ(step.xi, unit_gap_xi({{0, 0.4, 0}, {0.4, 1, 1}}));
  auto quarter = averaged_xi(unit_gap_xi({{0, 1, 0.25}}), subdivide(kUnitGap, {2, 0.01}));
  const auto gs = subdivide(kUnitGap, {2, 0.01}).gaps();
  for (const auto& g : gs) EXPECT_NEAR(gap_integral(quarter.xi, g), 0.25 * 0.495, 1e-15);
  EXPECT_EQ(quarter.deleted_bands, 0);
}

TEST(AveragedXi, DeletesBandsAtEndpoints) {
  // xi = 0 on the whole gap: both sub-gaps have mu = b, the band between them goes
  auto an = subdivide(kUnitGap, {2, 0.01});
  auto zero = averaged_xi(unit_gap_xi({{0, 1, 0}}), an, kUnitGap);
  EXPECT_EQ(zero.deleted_bands, 1);
  EXPECT_EQ(zero.set, kUnitGap);
  EXPECT_EQ(zero.xi, unit_gap_xi({{0, 1, 0}}));
  auto one = averaged_xi(unit_gap_xi({{0, 1, 1}}), an, kUnitGap);
  EXPECT_EQ(one.deleted_bands, 1);
  EXPECT_EQ(one.xi, unit_gap_xi({{0, 1, 1}}));
  // the result always lies in X(set)
  EXPECT_NO_THROW(validate_xi_in_XK(zero.xi, zero.set));
  EXPECT_NO_THROW(validate_xi_in_XK(one.xi, one.set));
}

TEST(TinyBandWeight, Examples) {
  for (double d : {1e-2, 1e-4}) EXPECT_NEAR(lemma32_h(d / 2, 1.0, d), (d / 2) / (1.0 + d / 2), 1e-15);
  double prev = 1e300;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const double w = lemma32_band_weight(1, 1, d, 3);
    EXPECT_LT(w, prev);
    prev = w;
  }
  EXPECT_LT(lemma32_band_weight(1, 1, 1e-6, 3), lemma32_band_weight(1, 1, 1e-2, 3) / 10);
}

TEST(TinyBandWeight, DensityMatchesBoundaryH) {
  for (double d : {1e-2, 1e-3}) {
    const auto xi = lemma32_xi(1, 1, d, 3);
    for (double x : {0.1 * d, 0.5 * d, 0.93 * d})
      EXPECT_NEAR(lemma32_density(x, 1, 1, d, 3), std::abs(boundary_H(xi, x)) / std::numbers::pi,
                  1e-12 * lemma32_density(x, 1, 1, d, 3));
    const double mass = oracle::integrate_singular(
        [&](double x) { return xi.is_breakpoint(x) ? 0.0 : std::abs(boundary_H(xi, x)) / std::numbers::pi; }, 0, d);
    EXPECT_NEAR(lemma32_band_weight(1, 1, d, 3), mass, 1e-10 * mass);
  }
}

TEST(SplitPointMass, WeightsFollowG) {
  const auto xi = one_gap_xi(0.0);
  for (double g : {0.3, 0.5}) {
    const double d = 1e-3;
    const auto split = split_point_mass(xi, 0.0, g, d);
    const auto pos = atom_positions(split);
    ASSERT_EQ(pos.size(), 2u);
    EXPECT_NEAR(pos[0], -g * d, 1e-15);
    EXPECT_NEAR(pos[1], (1 - g) * d, 1e-15);
    const double wl = atom_weight(split, pos[0]), wr = atom_weight(split, pos[1]);
    EXPECT_NEAR(wl / (wl + wr), g, 0.01);
    const auto tw = splitting_twin_weights(xi, 0.0, g, d);
    EXPECT_NEAR(tw.left, wl, 1e-12 * wl);
    EXPECT_NEAR(tw.right, wr, 1e-12 * wr);
  }
}

TEST(SplitPointMass, ClearanceAndArguments) {
  const auto xi = one_gap_xi(0.95);
  EXPECT_THROW(split_point_mass(xi, 0.95, 0.5, 0.1), ValidationError);
  EXPECT_NO_THROW(split_point_mass(xi, 0.95, 0.5, 0.01));
  EXPECT_THROW(split_point_mass(xi, 0.95, 0.0, 0.01), ValidationError);
  EXPECT_THROW(split_point_mass(xi, 0.5, 0.5, 0.01), ValidationError);
}

TEST(Transport, Examples) {
  TorusPoint p{{0.2}, {1}};
  auto same = transport_torus_data(kOneGap, kOneGap, p);
  EXPECT_EQ(same.mu, p.mu);
  EXPECT_EQ(same.sigma, p.sigma);
  FiniteGapSet moved({{-2, -1 + 1e-4}, {1, 2}}, 3);
  auto q = transport_torus_data(kOneGap, moved, p);
  EXPECT_EQ(q.mu[0], 0.2);
  EXPECT_EQ(q.sigma[0], 1);
  auto e = transport_torus_data(kOneGap, moved, {{-1.0}, {0}});
  EXPECT_EQ(e.mu[0], -1 + 1e-4);
  // a new gap in the target carries mu = b
  FiniteGapSet extra({{-2, -1}, {1, 1.4}, {1.5, 2}}, 3);
  auto x = transport_torus_data(kOneGap, extra, p);
  ASSERT_EQ(x.mu.size(), 2u);
  EXPECT_EQ(x.mu[0], 0.2);
  EXPECT_EQ(x.mu[1], 1.5);
  FiniteGapSet far({{-2, -0.5}, {1, 2}}, 3);
  EXPECT_THROW(transport_torus_data(kOneGap, far, p), ValidationError);
}

TEST(Approximate, NothingToSplit) {
  // xi in X(B) with mu at the right end of the gap: rho lives on B
  const auto xi = one_gap_xi(1.0);
  auto run = approximate_reflectionless(kOneGap, xi, {{0}, std::nullopt}, {{4, 1e-2}, {16, 1e-3}});
  for (const auto& st : run.stages) {
    EXPECT_EQ(st.set, kOneGap);
    EXPECT_EQ(st.symmdiff, 0.0);
    EXPECT_LT(st.operator_distance, 1e-9);
    EXPECT_TRUE(st.reflectionless.pass);
    EXPECT_TRUE(st.spectrum.pass);
  }
}

TEST(Approximate, OneAtomHalfSplit) {
  const auto xi = one_gap_xi(0.3);
  SplitSpec split{{0}, std::vector<double>{0.5}};
  auto run = approximate_reflectionless(kOneGap, xi, split, {{4, 4e-2}, {4, 2e-2}, {4, 1e-2}});
  double prev = 1e300;
  for (const auto& st : run.stages) {
    EXPECT_EQ(st.split_atoms, 1);
    EXPECT_LT(st.symmdiff, prev);
    prev = st.symmdiff;
    EXPECT_TRUE(st.reflectionless.pass) << st.reflectionless.max_abs_re;
    EXPECT_TRUE(st.spectrum.pass);
  }
  EXPECT_LT(run.stages.back().operator_distance, run.stages.front().operator_distance);
}

TEST(Approximate, RandomCaseConverges) {
  std::mt19937_64 rng(42);
  FiniteGapSet b({{-2, -1}, {-0.4, 0.3}, {1, 2}}, 3);
  const auto xi = random_gap_xi(b, rng, 4);
  ApproxOptions opt;
  opt.depth = 30;
  auto run = approximate_reflectionless(b, xi, {{1, 0}, std::nullopt}, {{4, 1e-2}, {16, 1e-3}, {64, 1e-4}}, opt);
  for (std::size_t i = 0; i < run.stages.size(); ++i) {
    const auto& st = run.stages[i];
    EXPECT_TRUE(st.reflectionless.pass) << i;
    EXPECT_TRUE(st.spectrum.pass) << i;
    for (const auto& band : b.bands()) EXPECT_TRUE(st.set.contains(band.mid()));
    if (i > 0) {
      EXPECT_LT(st.operator_distance, run.stages[i - 1].operator_distance);
      EXPECT_LT(st.symmdiff, run.stages[i - 1].symmdiff);
      EXPECT_LT(st.nu_plus_distance, run.stages[i - 1].nu_plus_distance);
    }
  }
  ReflectionlessOptions ro = opt.reflectionless;
  EXPECT_TRUE(is_reflectionless(run.stages.back().rec.jacobi, b, ro).pass);
}

TEST(Properties, AveragingPreservesGapIntegrals) {
  std::mt19937_64 rng(7);
  FiniteGapSet b({{-2.5, -2}, {-1, 0}, {1, 2}}, 3);
  for (int t = 0; t < 30; ++t) {
    const auto xi = random_gap_xi(b, rng, 1 + static_cast<int>(rng() % 5));
    const SubdivisionPlan plan{1 + static_cast<int>(rng() % 8), 1e-3};
    const auto an = subdivide(b, plan);
    const auto avg = averaged_xi(xi, an, b);
    EXPECT_NO_THROW(validate_xi_in_XK(avg.xi, avg.set));
    for (const auto& g : an.gaps()) EXPECT_NEAR(gap_integral(avg.xi, g), gap_integral(xi, g), 1e-12);
    // over a whole gap of B only the new bands differ: 1/2 there (or 0/1 when
    // deleted) in place of the original values
    for (const auto& g : b.gaps())
      EXPECT_NEAR(gap_integral(avg.xi, g), gap_integral(xi, g),
                  0.5 * plan.delta * (plan.n - 1) + 0.5 * plan.delta * avg.deleted_bands + 1e-12);
  }
}

TEST(Properties, SplitMassConverges) {
  const auto xi = one_gap_xi(0.1);
  const double w = atom_weight(xi, 0.1);
  double prev = 1e300;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const auto s = split_point_mass(xi, 0.1, 0.3, d);
    const auto pos = atom_positions(s);
    double total = atom_weight(s, pos[0]) + atom_weight(s, pos[1]);
    const auto sliver = AcBand::chebyshev({0.1, 0.1 + d * d}, 64, [&](double x) {
      return std::abs(boundary_H(s, x)) / std::numbers::pi;
    });
    total += sliver.mass();
    const double err = std::abs(total - w);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev / w, 1e-3);
}
