#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rlj/jacobi.hpp"

using namespace rlj;
using oracle::cd;

namespace {

JacobiMatrix random_window(std::mt19937_64& rng, long half = 30) {
  std::uniform_real_distribution<double> ua(0.3, 1.5), ub(-1, 1);
  std::vector<double> a(2 * half), b(2 * half + 1);
  for (auto& x : a) x = ua(rng);
  for (auto& x : b) x = ub(rng);
  return {a, b, -half};
}

cd random_z(std::mt19937_64& rng, double ymin = 1e-3) {
  return {std::uniform_real_distribution<double>(-4, 4)(rng),
          std::pow(10.0, std::uniform_real_distribution<double>(std::log10(ymin), 1)(rng))};
}

}  // namespace

TEST(GreenFunction, FreeClosedForm) {
  const auto j = JacobiMatrix::constant(1, 0);
  EXPECT_NEAR(std::abs(green_function(j, 0, {0, 3}) - cd(0, 1 / std::sqrt(13.0))), 0.0, 1e-15);
  for (cd z : {cd(0.5, 1e-4), cd(-2.5, 0.01), cd(1.9, 2), cd(3, 1e-6)})
    for (long n : {-50L, 0L, 17L}) EXPECT_NEAR(std::abs(green_function(j, n, z) + 1.0 / oracle::free_sqrt(z)), 0.0, 1e-12);
}

TEST(GreenFunction, Diagonal) {
  const auto j = JacobiMatrix::constant(0, 0.7, 5);
  for (cd z : {cd(0.7, 0.1), cd(-1, 3)})
    for (long n = -5; n <= 5; ++n) EXPECT_NEAR(std::abs(green_function(j, n, z) - 1.0 / (0.7 - z)), 0.0, 1e-15);
}

TEST(GreenFunction, MatchesLargeDenseWindow) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    const auto j = random_window(rng);
    auto a = [&](long n) { return j.a(n); };
    auto b = [&](long n) { return j.b(n); };
    for (int s = 0; s < 4; ++s) {
      const cd z{std::uniform_real_distribution<double>(-3, 3)(rng), 0.1 + 0.5 * s};
      const long n = static_cast<long>(rng() % 41) - 20;
      EXPECT_NEAR(std::abs(green_function(j, n, z) - oracle::dense_green(a, b, -200, 200, n, z)), 0.0, 1e-10);
    }
  }
}

TEST(GreenFunction, PeriodicMatchesLargeDenseWindow) {
  const auto j = JacobiMatrix::periodic({1.0, 0.5, 0.8}, {0.2, -0.4, 0.0});
  auto a = [&](long n) { return j.a(n); };
  auto b = [&](long n) { return j.b(n); };
  for (cd z : {cd(0.3, 0.1), cd(-1.2, 0.4), cd(2.0, 1.0)})
    for (long n : {0L, 1L, 2L, 7L, -4L})
      EXPECT_NEAR(std::abs(green_function(j, n, z) - oracle::dense_green(a, b, -300, 300, n, z)), 0.0, 1e-10);
}

TEST(GreenFunction, SiteOutsideWindow) {
  const auto j = JacobiMatrix::constant(1, 0, 10);
  EXPECT_THROW(green_function(j, 11, {0, 1}), ValidationError);
  EXPECT_THROW(green_function(j, 0, {0, 0}), ValidationError);
  EXPECT_NO_THROW(green_function(JacobiMatrix::periodic({1.0}, {0.0}), 1000, {0, 1}));
}

TEST(HFunction, FreeAndDiagonal) {
  for (cd z : {cd(0.1, 0.2), cd(-3, 1e-3)}) {
    EXPECT_NEAR(std::abs(h_function(JacobiMatrix::constant(1, 0), z) - oracle::free_sqrt(z)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(h_function(JacobiMatrix::constant(0, 0.4, 3), z) - (z - 0.4)), 0.0, 1e-14);
  }
}

// H = z - b(0) + a(0)^2 m_+ + a(-1)^2 m_-
TEST(HFunction, HalfLineDecomposition) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto j = random_window(rng);
    auto a = [&](long n) { return j.a(n); };
    auto b = [&](long n) { return j.b(n); };
    const cd z{std::uniform_real_distribution<double>(-3, 3)(rng), 0.2};
    const cd mp = oracle::halfline_cf(a, b, 1, 400, z, +1);
    const cd mm = oracle::halfline_cf(a, b, -1, 400, z, -1);
    const cd want = z - j.b(0) + j.a(0) * j.a(0) * mp + j.a(-1) * j.a(-1) * mm;
    EXPECT_NEAR(std::abs(h_function(j, z) - want), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(halfline_stieltjes(j, HalfLine::plus, z) - j.a(0) * j.a(0) * mp), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(halfline_stieltjes(j, HalfLine::minus, z) - j.a(-1) * j.a(-1) * mm), 0.0, 1e-10);
  }
}

TEST(SpectralTails, AgreeWithCoefficients) {
  std::mt19937_64 rng(4);
  const auto j = random_window(rng);
  SpectralTails tails{[&](cd z) { return halfline_stieltjes(j, HalfLine::plus, z); },
                      [&](cd z) { return halfline_stieltjes(j, HalfLine::minus, z); }};
  const auto jt = j.with_policy(tails);
  for (long n = -3; n <= 3; ++n) {
    const cd z{0.3, 0.5};
    EXPECT_NEAR(std::abs(green_function(jt, n, z) - green_function(j, n, z)), 0.0, 1e-12);
  }
}

TEST(OperatorDistance, Weights) {
  const auto j0 = JacobiMatrix::constant(1, 0, 10);
  EXPECT_EQ(operator_distance(j0, j0, 10), 0.0);
  EXPECT_NEAR(operator_distance(j0, j0.plus_identity(1.0), 10), 3.0 - std::ldexp(2.0, -10), 1e-15);
}

TEST(Validation, Windows) {
  EXPECT_THROW(JacobiMatrix({1.0}, {0.0}, 0), ValidationError);
  EXPECT_THROW(JacobiMatrix({-1.0}, {0.0, 0.0}, 0), ValidationError);
  EXPECT_THROW(JacobiMatrix({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, 0, Periodic{2}), ValidationError);
  EXPECT_THROW(JacobiMatrix({1.0}, {std::nan(""), 0.0}, 0), ValidationError);
}

TEST(Properties, GreenAndHAreHerglotz) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto j = random_window(rng, 10);
    for (int s = 0; s < 10; ++s) {
      const cd z = random_z(rng);
      const long n = static_cast<long>(rng() % 21) - 10;
      EXPECT_GT(green_function(j, n, z).imag(), 0.0);
      EXPECT_GT(h_function(j, z).imag(), 0.0);
    }
  }
}
