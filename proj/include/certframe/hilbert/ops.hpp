#pragma once

#include "certframe/hilbert/vector_name.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace certframe {

/// Name of |x - P_N x|, P_N the projection onto span(e_0..e_{N-1}).
inline RealName tail_norm(const VectorName& x, std::size_t N) {
  return VectorName::from_cauchy([x, N](Precision n) { return x.approx(n).tail_from(N); }, x.bound()).norm();
}

/// x restricted to the first d coordinates.
inline VectorName project_head(const VectorName& x, std::size_t d) {
  return VectorName::from_cauchy([x, d](Precision n) { return x.approx(n).truncated(d); }, x.bound());
}

struct Truncation {
  FiniteVector vector;
  std::size_t length = 0;  // N: the vector is supported on [0, N)
};

/**
 * Finite v with |x - v| <= eps. N is the first index whose certified tail
 * falls below eps/2; the head comes from an approximant within eps/2.
 */
inline Truncation truncate(const VectorName& x, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("truncate needs eps > 0");
  auto k = static_cast<Precision>(ceil_log2(Rational(1) / eps) + 3);
  Rational half = eps / 2;
  Rational slack = pow2(-k);
  std::size_t N = 0;
  for (;; ++N) {
    Rational t = tail_norm(x, N).approx(k).to_rational();
    if (t + slack < half) break;
  }
  auto head_prec = static_cast<Precision>(ceil_log2(Rational(1) / eps) + 1);
  DyadicVector head = x.approx(head_prec).truncated(N);
  return {FiniteVector::from_dyadic(head), N};
}

/**
 * <x, y>. Both sides are taken within eps = 2^-k where
 * eps (|x| + |y| + eps) <= 2^-(n+1); the exact dyadic dot product is then
 * rounded to the 2^-(n+2) grid.
 */
inline RealName inner(const VectorName& x, const VectorName& y) {
  std::int64_t guard = ceil_log2(x.bound() + y.bound() + 1) + 1;
  return RealName::from_oracle(
      [x, y, guard](Precision n) {
        auto k = static_cast<Precision>(n + guard);
        return x.approx(k).dot(y.approx(k)).rounded(n + 2);
      },
      loosen_up(x.bound() * y.bound()));
}

using Term = std::pair<RealName, VectorName>;

/// sum_j c_j x_j for finitely many terms.
inline VectorName linear_combo(std::vector<Term> terms) {
  Rational weight = 0, bound = 0;
  for (const auto& [c, x] : terms) {
    weight += c.mag() + x.bound() + 1;
    bound += c.mag() * x.bound();
  }
  if (terms.empty()) return VectorName::zero();
  // |c x - c'x'| <= 2^-k (|x| + |c| + 1) per term
  std::int64_t guard = ceil_log2(weight) + 1;
  auto shared = std::make_shared<const std::vector<Term>>(std::move(terms));
  return VectorName::from_cauchy(
      [shared, guard](Precision n) {
        auto k = static_cast<Precision>(n + guard);
        DyadicVector acc;
        for (const auto& [c, x] : *shared) acc.axpy(c.approx(k), x.approx(k));
        return acc.rounded_within(n + 2);
      },
      bound);
}

inline VectorName linear_combo(const std::vector<std::pair<Rational, VectorName>>& terms) {
  std::vector<Term> t;
  t.reserve(terms.size());
  for (const auto& [c, x] : terms) t.emplace_back(RealName::exact(c), x);
  return linear_combo(std::move(t));
}

inline VectorName operator+(const VectorName& x, const VectorName& y) {
  return linear_combo({{RealName::integer(1), x}, {RealName::integer(1), y}});
}
inline VectorName operator-(const VectorName& x, const VectorName& y) {
  return linear_combo({{RealName::integer(1), x}, {RealName::integer(-1), y}});
}
inline VectorName scale(const RealName& c, const VectorName& x) { return linear_combo({{c, x}}); }

/// Limit of a sequence with |s(k) - L| <= 2^-k.
inline VectorName limit_vectors(std::function<VectorName(Precision)> sequence) {
  Rational bound = sequence(0).bound() + 1;
  return VectorName::from_cauchy([s = std::move(sequence)](Precision n) { return s(n + 1).approx(n + 1); }, bound);
}

}  // namespace certframe
