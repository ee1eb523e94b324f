#pragma once

#include "certframe/core/real_name.hpp"
#include "certframe/hilbert/finite_vector.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace certframe {

/**
 * Name of a point of l2 in the Fourier representation: coefficient names
 * coeff(i) = <x, e_i> and a name of the norm. Every VectorName additionally
 * answers Cauchy queries approx(n), a finite dyadic vector v with
 * |x - v| <= 2^-n; whichever side a constructor supplies, the other is derived.
 */
class VectorName {
 public:
  using CauchyOracle = std::function<DyadicVector(Precision)>;
  using CoeffOracle = std::function<RealName(std::size_t)>;

  VectorName() : VectorName(zero()) {}

  /// From Cauchy approximants; `bound` must satisfy |x| <= bound.
  static VectorName from_cauchy(CauchyOracle oracle, Rational bound) {
    auto core = std::make_shared<const Core>(std::move(oracle));
    auto node = std::make_shared<Node>();
    node->core = core;
    node->bound = loosen_up(bound);
    node->norm = RealName::from_oracle(
        [core](Precision n) {
          // | |v| - |x| | <= 2^-(n+2); the root adds at most 2^-(n+2) more.
          Dyadic sq = core->approx(n + 2).norm_squared();
          return detail::sqrt_floor(sq, n + 3).rounded(n + 3);
        },
        node->bound);
    return VectorName(std::move(node));
  }

  /**
   * From Fourier data. `norm` must name exactly sqrt(sum coeff(i)^2); this is
   * the caller's certificate. Cauchy approximants come from the tail search.
   */
  static VectorName from_fourier(CoeffOracle coeff, RealName norm) {
    auto node = std::make_shared<Node>();
    node->core = std::make_shared<const Core>(
        [coeff, norm](Precision n) { return fourier_to_cauchy(coeff, norm, n); });
    node->coeff = std::move(coeff);
    node->norm = norm;
    node->bound = loosen_up(norm.mag());
    return VectorName(std::move(node));
  }

  static VectorName from_finite(const FiniteVector& v) {
    Rational sq = v.norm_squared();
    auto node = std::make_shared<Node>();
    node->core = std::make_shared<const Core>([v](Precision n) { return v.approximate(n); });
    node->bound = sqrt_upper(sq);
    node->norm = sqrt_name(RealName::exact(sq));
    node->coeff = [v](std::size_t i) { return RealName::exact(v.at(i)); };
    return VectorName(std::move(node));
  }

  static VectorName from_dyadic(const DyadicVector& v) { return from_finite(FiniteVector::from_dyadic(v)); }

  /// Finitely many real entries x_0..x_{m-1}, zero beyond.
  static VectorName from_reals(std::vector<RealName> entries) {
    Rational bound = 0;
    for (const auto& e : entries) bound += e.mag() * e.mag();
    auto shared = std::make_shared<const std::vector<RealName>>(std::move(entries));
    VectorName v = from_cauchy(
        [shared](Precision n) {
          const auto& xs = *shared;
          std::int64_t half_log = (msb_of(BigInt(xs.size() + 1)) + 2) / 2;
          std::vector<Dyadic> d;
          d.reserve(xs.size());
          for (const auto& x : xs) d.push_back(x.approx(static_cast<Precision>(n + half_log + 1)));
          return DyadicVector(std::move(d));
        },
        sqrt_upper(bound));
    auto node = std::make_shared<Node>(*v.node_);
    node->coeff = [shared](std::size_t i) { return i < shared->size() ? (*shared)[i] : RealName::integer(0); };
    return VectorName(std::move(node));
  }

  static VectorName basis(std::size_t k) { return from_finite(FiniteVector({{k, Rational(1)}})); }
  static VectorName zero() { return from_finite(FiniteVector()); }

  RealName coeff(std::size_t i) const {
    if (node_->coeff) return node_->coeff(i);
    auto core = node_->core;
    return RealName::from_oracle([core, i](Precision n) { return core->approx(n).at(i); }, node_->bound);
  }

  const RealName& norm() const { return node_->norm; }

  /// |x| <= bound()
  const Rational& bound() const { return node_->bound; }

  /// Finite dyadic v with |x - v| <= 2^-n.
  DyadicVector approx(Precision n) const { return node_->core->approx(n); }

  bool same_node(const VectorName& o) const { return node_ == o.node_; }

 private:
  struct Core {
    explicit Core(CauchyOracle c) : cauchy(std::move(c)) {}
    CauchyOracle cauchy;
    detail::Memo<Precision, DyadicVector> memo;

    DyadicVector approx(Precision n) const {
      n = std::max(n, 0);
      return memo.get(n, [&] { return cauchy(n); });
    }
  };

  struct Node {
    std::shared_ptr<const Core> core;
    CoeffOracle coeff;  // empty: derived from the Cauchy approximants
    RealName norm;
    Rational bound;
  };

  /**
   * Find N with certified tail |x - P_N x|^2 <= 2^-(2n+3), then use the
   * coefficient approximants for i < N. Precision and scan length grow
   * together until the certificate is met; tails of l2 vectors vanish, so
   * the search terminates.
   */
  static DyadicVector fourier_to_cauchy(const CoeffOracle& coeff, const RealName& norm, Precision n) {
    const Dyadic tail_target = Dyadic::pow2(-2 * static_cast<std::int64_t>(n) - 3);
    for (int round = 0;; ++round) {
      Precision k = 2 * n + 8 + 2 * round;
      std::size_t scan_cap = std::size_t{64} << std::min(round, 40);
      Dyadic eps = Dyadic::pow2(-k);
      Dyadic nu = abs(norm.approx(k)) + eps;
      Dyadic upper = nu * nu;
      Dyadic lower_sum;
      std::vector<Dyadic> head;
      for (std::size_t N = 0; N <= scan_cap; ++N) {
        if (upper - lower_sum <= tail_target) {
          // head error sqrt(N) 2^-k is far below 2^-(n+3); rounding adds 2^-(n+3)
          return DyadicVector(std::move(head)).rounded_within(n + 3);
        }
        Dyadic c = coeff(N).approx(k);
        Dyadic low = abs(c) - eps;
        if (low.sign() > 0) lower_sum += low * low;
        head.push_back(std::move(c));
      }
    }
  }

  explicit VectorName(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/**
 * Coefficient data of a point of l2 with only an upper bound on its norm.
 * Deliberately not convertible to VectorName: without a norm name there are
 * no computable tails, so it cannot be synthesized against.
 */
class WeakVectorName {
 public:
  using CoeffOracle = std::function<RealName(std::size_t)>;

  WeakVectorName(CoeffOracle coeff, Rational norm_upper) : coeff_(std::move(coeff)), norm_upper_(std::move(norm_upper)) {
    if (norm_upper_ < 0) throw std::invalid_argument("norm upper bound must be non-negative");
  }

  RealName coeff(std::size_t i) const { return coeff_(i); }
  const Rational& norm_upper() const { return norm_upper_; }
  const CoeffOracle& coeff_oracle() const { return coeff_; }

 private:
  CoeffOracle coeff_;
  Rational norm_upper_;
};

/// The norm name is the certificate that upgrades coefficients to a full name.
inline VectorName strengthen(const WeakVectorName& w, const RealName& norm) {
  if (norm.mag() > w.norm_upper() + 1) {
    throw std::invalid_argument("norm certificate exceeds the weak name's norm bound");
  }
  return VectorName::from_fourier(w.coeff_oracle(), norm);
}

}  // namespace certframe
