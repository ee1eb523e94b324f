#include "certframe/core/real_name.hpp"
#include "support/checks.hpp"
#include "support/random_expr.hpp"

#include <gtest/gtest.h>

#include <thread>
#include <vector>

using namespace certframe;
using certframe::testing::r;
using certframe::testing::within;
using certframe::testing::within_sqrt;

TEST(Dyadic, CanonicalForm) {
  Dyadic a(BigInt(12), 0);
  EXPECT_EQ(a.mantissa(), 3);
  EXPECT_EQ(a.exponent(), 2);
  Dyadic z(BigInt(0), 17);
  EXPECT_EQ(z.exponent(), 0);
  EXPECT_EQ(Dyadic(BigInt(-8), -5), Dyadic(BigInt(-1), -2));
  EXPECT_EQ((Dyadic(BigInt(3), -2) - Dyadic(BigInt(3), -2)).exponent(), 0);
}

TEST(Dyadic, Arithmetic) {
  Dyadic a(BigInt(3), -2), b(BigInt(5), -3);
  EXPECT_EQ((a + b).to_rational(), r(11, 8));
  EXPECT_EQ((a - b).to_rational(), r(1, 8));
  EXPECT_EQ((a * b).to_rational(), r(15, 32));
  EXPECT_LT(b, a);
  EXPECT_EQ(abs(-a), a);
  EXPECT_EQ(a.shifted(3).to_rational(), 6);
  EXPECT_DOUBLE_EQ(b.to_double(), 0.625);
}

TEST(Dyadic, Rounding) {
  Dyadic x(BigInt(11), -4);  // 0.6875
  EXPECT_EQ(x.rounded(2).to_rational(), r(3, 4));
  EXPECT_EQ(x.rounded(0).to_rational(), 1);
  EXPECT_EQ((-x).rounded(2).to_rational(), r(-3, 4));
  EXPECT_EQ(x.rounded(10), x);
  EXPECT_EQ(Dyadic::round_rational(r(1, 3), 4).to_rational(), r(5, 16));
  EXPECT_EQ(Dyadic::round_rational(r(-1, 3), 4).to_rational(), r(-5, 16));
  EXPECT_EQ(Dyadic::round_rational(r(100), -3).to_rational(), 104);
}

TEST(Dyadic, TextRoundTrip) {
  Dyadic x(BigInt(-5), -7);
  EXPECT_EQ(x.str(), "-5*2^-7");
  EXPECT_EQ(Dyadic::parse("-5*2^-7"), x);
  EXPECT_EQ(Dyadic::parse("12*2^0"), Dyadic(BigInt(3), 2));
  EXPECT_THROW(Dyadic::parse("5e3"), std::invalid_argument);
  EXPECT_THROW(Dyadic::parse("1/2*2^3"), std::invalid_argument);
}

TEST(Numbers, Helpers) {
  EXPECT_EQ(ceil_log2(r(1)), 0);
  EXPECT_EQ(ceil_log2(r(5)), 3);
  EXPECT_EQ(ceil_log2(r(1, 3)), -1);
  EXPECT_EQ(floor_log2(r(1, 3)), -2);
  EXPECT_EQ(sqrt_upper(r(9, 4)), r(3, 2));
  Rational s = sqrt_upper(r(10));
  EXPECT_GE(s * s, 10);
  EXPECT_LE(s - sqrt_lower(r(10)), pow2(-30));
  EXPECT_GE(loosen_up(r(1, 3)), r(1, 3));
  EXPECT_LE(loosen_up(r(1, 3)) - r(1, 3), pow2(-45));
  EXPECT_EQ(parse_rational("-7/21"), r(-1, 3));
  EXPECT_EQ(parse_rational("1.25"), r(5, 4));
  EXPECT_EQ(parse_rational("-0.5"), r(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(RealName, ApproxExamples) {
  auto third = RealName::exact(r(1, 3));
  EXPECT_TRUE(within(third.approx(4), r(1, 3), 4));
  auto zero = RealName::integer(0);
  for (int n : {0, 5, 60}) EXPECT_TRUE(zero.approx(n).is_zero());
}

TEST(RealName, LiftArithExamples) {
  auto half = RealName::exact(r(1, 2));
  EXPECT_EQ((half + half).approx(3).to_rational(), 1);
  auto prod = RealName::integer(3) * RealName::exact(r(1, 3));
  for (int n : {0, 7, 31, 64}) EXPECT_TRUE(within(prod.approx(n), r(1), n));
  auto sq = RealName::exact(r(3, 2)) * RealName::exact(r(3, 2));
  EXPECT_TRUE(within(sq.approx(20), r(9, 4), 20));
  EXPECT_GE(sq.mag(), r(9, 4));
  EXPECT_LE(sq.mag() - r(9, 4), pow2(-40));
}

TEST(RealName, RecipExamples) {
  EXPECT_TRUE(within(recip(RealName::integer(2), r(1)).approx(10), r(1, 2), 10));
  auto one = recip(RealName::integer(1), r(1, 2));
  EXPECT_EQ(one.mag(), 2);
  EXPECT_TRUE(within(one.approx(20), r(1), 20));
  EXPECT_TRUE(within(recip(RealName::integer(3), r(2)).approx(30), r(1, 3), 30));
  EXPECT_THROW(recip(RealName::integer(3), r(0)), std::invalid_argument);
  EXPECT_THROW(recip(RealName::integer(3), r(-1)), std::invalid_argument);
}

TEST(RealName, SqrtExamples) {
  auto z = sqrt_name(RealName::integer(0));
  for (int n : {0, 10, 50}) EXPECT_TRUE(z.approx(n).is_zero());
  EXPECT_TRUE(within(sqrt_name(RealName::integer(4)).approx(10), r(2), 10));
  auto s2 = sqrt_name(RealName::integer(2));
  EXPECT_TRUE(within_sqrt(s2.approx(40), r(2), 40));
  // argument whose approximants dip below zero
  auto tiny = RealName::exact(pow2(-200)) - RealName::exact(pow2(-200));
  EXPECT_TRUE(sqrt_name(tiny).approx(30).is_zero() || sqrt_name(tiny).approx(30).to_rational() <= pow2(-30));
}

TEST(RealName, LimitExamples) {
  auto c = limit_fast([](Precision) { return RealName::exact(r(7, 5)); });
  EXPECT_TRUE(within(c.approx(25), r(7, 5), 25));

  // sum_{i<=k} 4^-i has tail 4^-k/3 <= 2^-k
  auto geometric = limit_fast([](Precision k) {
    Rational s = 0;
    for (int i = 0; i <= k; ++i) s += pow2(-2 * i);
    return RealName::exact(s);
  });
  EXPECT_TRUE(within(geometric.approx(10), r(4, 3), 10));
  EXPECT_TRUE(within(geometric.approx(50), r(4, 3), 50));

  // e - 1 = sum_{i>=1} 1/i!, tail after K terms <= 2/(K+1)!
  auto e_minus_1 = limit_fast([](Precision k) {
    Rational s = 0, term = 1, bound = 2;
    int i = 1;
    while (true) {
      term /= i;
      s += term;
      bound /= (i + 1);
      if (bound <= pow2(-k)) break;
      ++i;
    }
    return RealName::exact(s);
  });
  // e to 50 digits, independent of the series
  Rational e50 = parse_rational("2.71828182845904523536028747135266249775724709369995");
  for (int n : {10, 40, 100}) {
    EXPECT_LE(abs(e_minus_1.approx(n).to_rational() - (e50 - 1)), pow2(-n) + Rational(BigInt(1), boost::multiprecision::pow(BigInt(10), 50)));
  }
}

TEST(RealName, NegativePrecisionServedByZero) {
  auto x = RealName::exact(r(5, 3));
  EXPECT_EQ(x.approx(-4), x.approx(0));
}

TEST(RealNameProperties, PairwiseConsistencyAndOracle) {
  certframe::testing::ExprGen gen(0xC0FFEE);
  for (int t = 0; t < 300; ++t) {
    auto e = gen.make(4);
    std::vector<Dyadic> a;
    for (int n = 0; n <= 48; ++n) a.push_back(e.name.approx(n));
    for (int n = 0; n <= 48; ++n) {
      ASSERT_TRUE(within(a[n], e.exact, n)) << "expression " << t;
      ASSERT_LE(abs(a[n].to_rational()), e.name.mag() + 1);
      for (int m = n + 1; m <= 48; ++m) {
        ASSERT_LE(abs((a[n] - a[m]).to_rational()), pow2(-n) + pow2(-m));
      }
    }
    ASSERT_GE(e.name.mag(), abs(e.exact));
  }
}

TEST(RealNameProperties, ArithmeticHomomorphism) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Rational p = certframe::testing::random_rational(rng, 50, 17), q = certframe::testing::random_rational(rng, 50, 17);
    auto P = RealName::exact(p), Q = RealName::exact(q);
    for (int n : {0, 3, 20, 47}) {
      ASSERT_TRUE(within((P + Q).approx(n), p + q, n));
      ASSERT_TRUE(within((P - Q).approx(n), p - q, n));
      ASSERT_TRUE(within((P * Q).approx(n), p * q, n));
    }
  }
}

TEST(RealNameProperties, DeterministicAcrossThreads) {
  certframe::testing::ExprGen gen(77);
  std::vector<certframe::testing::Expr> exprs;
  for (int i = 0; i < 40; ++i) exprs.push_back(gen.make(3));
  std::vector<std::vector<Dyadic>> seen(4);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (const auto& e : exprs) {
        for (int n = 40; n >= 0; n -= 8) seen[t].push_back(e.name.approx(n));
      }
    });
  }
  for (auto& th : threads) th.join();
  for (int t = 1; t < 4; ++t) EXPECT_EQ(seen[t], seen[0]);

  // a fresh but structurally identical name answers bit-identically
  certframe::testing::ExprGen again(77);
  auto first = again.make(3);
  for (int n = 0; n <= 40; n += 8) EXPECT_EQ(first.name.approx(n), exprs[0].name.approx(n));
}
