#include <gtest/gtest.h>

#include <boost/rational.hpp>

#include <random>

#include "mvlat/qunit.hpp"

using namespace mvlat;
using R = boost::rational<long long>;

namespace {

// Oracle: plain rationals with the textbook formulas.
R o_add(R a, R b) { return std::min(R(1), a + b); }
R o_mul(R a, R b) { return std::max(R(0), a + b - 1); }

UnitRational from(R r) { return UnitRational(r.numerator(), r.denominator()); }

UnitRational q(std::int64_t p, std::int64_t d) { return UnitRational(p, d); }

std::vector<UnitRational> grid(int n) {
  std::vector<UnitRational> out;
  for (int k = 0; k <= n; ++k) out.emplace_back(k, n);
  return out;
}

}  // namespace

TEST(Qunit, Examples) {
  EXPECT_EQ(mv_add(q(1, 2), q(1, 2)), UnitRational::one());
  EXPECT_EQ(mv_add(q(1, 3), q(1, 3)), q(2, 3));
  EXPECT_EQ(mv_add(UnitRational::zero(), q(5, 7)), q(5, 7));
  EXPECT_EQ(mv_mul(q(3, 4), q(3, 4)), q(1, 2));
  EXPECT_EQ(mv_neg(mv_neg(q(2, 9))), q(2, 9));
  EXPECT_EQ(dist(q(1, 3), q(1, 2)), q(1, 6));
}

TEST(Qunit, LowestTermsAndRange) {
  UnitRational x(Integer(6), Integer(8));
  EXPECT_EQ(x.numerator(), 3);
  EXPECT_EQ(x.denominator(), 4);
  EXPECT_EQ(UnitRational(0, 5).denominator(), 1);
  EXPECT_THROW(UnitRational(3, 2), input_error);
  EXPECT_THROW(UnitRational(-1, 2), input_error);
  EXPECT_THROW(UnitRational(1, 0), input_error);
}

TEST(Qunit, ParseAndPrint) {
  EXPECT_EQ(UnitRational::parse("0"), UnitRational::zero());
  EXPECT_EQ(UnitRational::parse("1"), UnitRational::one());
  EXPECT_EQ(UnitRational::parse("2/4"), q(1, 2));
  EXPECT_EQ(UnitRational::parse("2/4").str(), "1/2");
  EXPECT_EQ(UnitRational::parse("3/3").str(), "1");
  EXPECT_THROW(UnitRational::parse("x"), input_error);
  EXPECT_THROW(UnitRational::parse("1/"), input_error);
  EXPECT_THROW(UnitRational::parse("5/4"), input_error);
  EXPECT_THROW(UnitRational::parse("-1/2"), input_error);
  for (int n = 1; n <= 12; ++n)
    for (const auto& x : grid(n)) EXPECT_EQ(UnitRational::parse(x.str()), x);
}

TEST(Qunit, GridIndex) {
  EXPECT_TRUE(q(1, 2).on_grid(4));
  EXPECT_FALSE(q(1, 3).on_grid(4));
  EXPECT_EQ(q(1, 2).grid_index(4), 2);
  EXPECT_THROW(q(1, 3).grid_index(4), input_error);
}

TEST(Qunit, AgreesWithGridArithmetic) {
  for (int n = 1; n <= 12; ++n)
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        auto a = q(i, n), b = q(j, n);
        EXPECT_EQ(mv_add(a, b), q(std::min(n, i + j), n));
        EXPECT_EQ(mv_mul(a, b), q(std::max(0, i + j - n), n));
        EXPECT_EQ(mv_neg(a), q(n - i, n));
        EXPECT_EQ(join(a, b), q(std::max(i, j), n));
        EXPECT_EQ(meet(a, b), q(std::min(i, j), n));
        EXPECT_EQ(dist(a, b), q(std::abs(i - j), n));
        EXPECT_EQ(a < b, i < j);
      }
}

TEST(Qunit, AgreesWithRationalOracle) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    long long d1 = std::uniform_int_distribution<long long>(1, 60)(rng);
    long long d2 = std::uniform_int_distribution<long long>(1, 60)(rng);
    R a(std::uniform_int_distribution<long long>(0, d1)(rng), d1);
    R b(std::uniform_int_distribution<long long>(0, d2)(rng), d2);
    EXPECT_EQ(mv_add(from(a), from(b)), from(o_add(a, b)));
    EXPECT_EQ(mv_mul(from(a), from(b)), from(o_mul(a, b)));
    EXPECT_EQ(mv_sub(from(a), from(b)), from(o_mul(a, 1 - b)));
    EXPECT_EQ(dist(from(a), from(b)), from(a > b ? a - b : b - a));
    EXPECT_EQ(from(a) < from(b), a < b);
  }
}

TEST(Qunit, MVAxiomsExhaustive) {
  for (int n = 1; n <= 12; ++n) {
    auto g = grid(n);
    for (const auto& a : g) {
      EXPECT_EQ(mv_add(a, UnitRational::zero()), a);
      EXPECT_EQ(mv_neg(mv_neg(a)), a);
      EXPECT_EQ(mv_add(a, mv_neg(UnitRational::zero())), mv_neg(UnitRational::zero()));
      for (const auto& b : g) {
        EXPECT_EQ(mv_add(a, b), mv_add(b, a));
        EXPECT_EQ(mv_add(mv_neg(mv_add(mv_neg(a), b)), b), mv_add(mv_neg(mv_add(mv_neg(b), a)), a));
        EXPECT_LE(join(a, b), mv_add(a, b));
        EXPECT_LE(mv_mul(a, b), meet(a, b));
        EXPECT_EQ(dist(a, b).is_zero(), a == b);
        for (const auto& c : g) EXPECT_EQ(mv_add(mv_add(a, b), c), mv_add(a, mv_add(b, c)));
      }
    }
  }
}

TEST(Qunit, LargeDenominatorsStayExact) {
  UnitRational x(Integer("123456789012345678901234567890"), Integer("123456789012345678901234567891"));
  UnitRational y = mv_mul(x, x);
  EXPECT_EQ(mv_add(y, mv_neg(y)), UnitRational::one());
  EXPECT_LT(y, x);
}
