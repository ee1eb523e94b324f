#include "certframe/duality/duality.hpp"
#include "certframe/oracle/exact_frame.hpp"
#include "support/checks.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace certframe;
using namespace certframe::oracle;
using certframe::testing::r;

namespace {

int sign_at(const Poly& p, const Rational& x) {
  Rational v = eval(p, x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// det(x I - S) for 2x2 S, written out
Poly char_poly_2x2(const Matrix& S) {
  return {S[0][0] * S[1][1] - S[0][1] * S[1][0], -(S[0][0] + S[1][1]), r(1)};
}

ExactFrame random_frame(std::mt19937_64& rng, std::size_t d, std::size_t n) {
  std::vector<Vec> vs;
  for (std::size_t i = 0; i < n; ++i) {
    Vec v(d);
    for (auto& e : v) e = Rational(static_cast<long long>(rng() % 9) - 4, static_cast<long long>(rng() % 3) + 1);
    vs.push_back(v);
  }
  for (std::size_t i = 0; i < d; ++i) {
    Vec e(d);
    e[i] = 1;
    vs.push_back(e);  // keeps the family spanning
  }
  return ExactFrame::of(vs);
}

}  // namespace

TEST(Oracle, CharPolySmall) {
  Matrix S{{r(2), r(1)}, {r(1), r(2)}};
  EXPECT_EQ(char_poly(S), char_poly_2x2(S));
  Matrix D{{r(1), r(0), r(0)}, {r(0), r(2), r(0)}, {r(0), r(0), r(3)}};
  // (x-1)(x-2)(x-3)
  EXPECT_EQ(char_poly(D), (Poly{r(-6), r(11), r(-6), r(1)}));
}

TEST(Oracle, SquarefreeAndSturm) {
  Poly p{r(4), r(-4), r(1)};  // (x-2)^2
  Poly q = squarefree(p);
  EXPECT_EQ(q, (Poly{r(-2), r(1)}));
  auto chain = sturm_chain(squarefree(Poly{r(-6), r(11), r(-6), r(1)}));
  EXPECT_EQ(roots_in(chain, r(0), r(10)), 3);
  EXPECT_EQ(roots_in(chain, r(1), r(2)), 1);  // (1, 2] holds only 2
  EXPECT_EQ(roots_in(chain, r(3, 2), r(5, 2)), 1);
}

TEST(Oracle, MercedesBoundsCollapse) {
  ExactFrame F = ExactFrame::of({{r(1), r(0)}, {r(0), r(1)}, {r(1), r(1)}});
  Solution s = exact_frame_solve(F, 40);
  EXPECT_EQ(s.bounds.A.lo, r(1));
  EXPECT_EQ(s.bounds.A.hi, r(1));
  EXPECT_EQ(s.bounds.B.lo, r(3));
  EXPECT_EQ(s.bounds.B.hi, r(3));
  EXPECT_EQ(s.S_inv, (Matrix{{r(2, 3), r(-1, 3)}, {r(-1, 3), r(2, 3)}}));
  EXPECT_TRUE(bounds_hold(s.S, r(1), r(3)));
  EXPECT_FALSE(bounds_hold(s.S, r(1), r(5, 2)));
  EXPECT_FALSE(bounds_hold(s.S, r(11, 10), r(3)));
}

TEST(Oracle, NonSpanningIsRejected) {
  ExactFrame F = ExactFrame::of({{r(1), r(2)}, {r(2), r(4)}});
  EXPECT_THROW(exact_frame_solve(F), NonSpanningError);
  EXPECT_THROW(eigen_enclosure(frame_operator(F)), NonSpanningError);
  EXPECT_THROW(ExactFrame::of({{r(1)}, {r(1), r(2)}}), std::invalid_argument);
}

// Enclosures contain a sign change of the characteristic polynomial (or an exact root),
// and nothing lies below A.lo or above B.hi.
TEST(OracleProperty, EnclosuresAreSound) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    std::size_t d = 1 + rng() % 4, n = rng() % 4;
    ExactFrame F = random_frame(rng, d, n);
    Matrix S = frame_operator(F);
    Poly p = squarefree(char_poly(S));
    BoundsEnclosure b = eigen_enclosure(S, 24);
    for (const Enclosure& e : {b.A, b.B}) {
      ASSERT_LE(e.lo, e.hi);
      ASSERT_LE(e.hi - e.lo, pow2(-24));
      if (e.lo == e.hi) {
        EXPECT_EQ(eval(p, e.lo), 0);
      } else {
        EXPECT_TRUE(sign_at(p, e.hi) == 0 || sign_at(p, e.lo) != sign_at(p, e.hi));
      }
    }
    auto chain = sturm_chain(p);
    EXPECT_EQ(roots_in(chain, r(-1), b.A.lo) - (eval(p, b.A.lo) == 0 ? 1 : 0), 0);  // none below A.lo
    Rational trace = 0;
    for (std::size_t i = 0; i < d; ++i) trace += S[i][i];
    EXPECT_EQ(roots_in(chain, b.B.hi, trace + 1), 0);
    EXPECT_TRUE(bounds_hold(S, b.A.lo, b.B.hi));
    // S S^-1 = I and M is an idempotent symmetric matrix
    Solution s = exact_frame_solve(F);
    EXPECT_EQ(mat_mul(S, s.S_inv), identity(d));
    EXPECT_EQ(mat_mul(s.M, s.M), s.M);
    for (std::size_t i = 0; i < s.M.size(); ++i) {
      for (std::size_t k = 0; k < s.M.size(); ++k) EXPECT_EQ(s.M[i][k], s.M[k][i]);
    }
    EXPECT_EQ(rank(s.M), d);
  }
}

TEST(Concurrency, SharedFrameAndDualCache) {
  ExactFrame F = ExactFrame::of({{r(1), r(0), r(0)}, {r(0), r(1), r(0)}, {r(1), r(1), r(1)}, {r(0), r(1, 2), r(1)}});
  Solution sol = exact_frame_solve(F);
  CertifiedFrame CF = embed(F);
  const int threads = 8;
  std::vector<std::vector<DyadicVector>> seen(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int round = 0; round < 3; ++round) {
        for (std::size_t k = 0; k < F.vectors.size(); ++k) {
          std::size_t kk = (k + static_cast<std::size_t>(t)) % F.vectors.size();
          seen[t].push_back(CF.dual_elem(kk).approx(30 + round));
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int t = 0; t < threads; ++t) {
    for (int round = 0; round < 3; ++round) {
      for (std::size_t k = 0; k < F.vectors.size(); ++k) {
        std::size_t kk = (k + static_cast<std::size_t>(t)) % F.vectors.size();
        const DyadicVector& v = seen[t][static_cast<std::size_t>(round) * F.vectors.size() + k];
        // identical answers across threads, and each within 2^-(30+round) of S^-1 f_k
        EXPECT_EQ(v, CF.dual_elem(kk).approx(30 + round));
        EXPECT_LE(certframe::testing::distance_squared(v, sol.dual[kk]), pow2(-2 * (30 + round)));
      }
    }
  }
}
