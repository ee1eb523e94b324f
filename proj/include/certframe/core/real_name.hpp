#pragma once

#include "certframe/core/dyadic.hpp"
#include "certframe/core/numbers.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace certframe {

/// Precision request: an approximation must be within 2^-n.
using Precision = int;

namespace detail {

/// Thread-safe per-key memo. The value is computed outside the lock, so a
/// query never waits on another thread's in-flight computation; racing
/// threads compute the same deterministic value and the first insert wins.
template <class Key, class Value>
class Memo {
 public:
  template <class F>
  Value get(const Key& key, F&& compute) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard lock(mutex_);
    return table_.emplace(key, std::move(v)).first->second;
  }

 private:
  mutable std::mutex mutex_;
  mutable std::map<Key, Value> table_;
};

}  // namespace detail

/**
 * Name of a real number: an oracle n -> Dyadic with |approx(n) - x| <= 2^-n,
 * together with a rational bound |x| <= mag.
 *
 * Names are cheap shared handles over immutable oracles and may be queried
 * concurrently. Negative precisions are served by the precision-0 answer,
 * which already satisfies the weaker request.
 */
class RealName {
 public:
  using Oracle = std::function<Dyadic(Precision)>;

  RealName() : RealName(exact(Rational(0))) {}

  static RealName from_oracle(Oracle oracle, Rational mag) {
    if (mag < 0) throw std::invalid_argument("magnitude bound must be non-negative");
    return RealName(std::make_shared<Node>(std::move(oracle), std::move(mag)));
  }

  static RealName exact(const Rational& q) {
    return from_oracle([q](Precision n) { return Dyadic::round_rational(q, n); }, abs(q));
  }
  static RealName exact(const Dyadic& d) {
    return from_oracle([d](Precision) { return d; }, abs(d.to_rational()));
  }
  static RealName integer(long long v) { return exact(Rational(v)); }

  Dyadic approx(Precision n) const {
    n = std::max(n, 0);
    return node_->memo.get(n, [&] { return node_->oracle(n); });
  }

  /// |x| <= mag()
  const Rational& mag() const { return node_->mag; }

  bool same_node(const RealName& other) const { return node_ == other.node_; }

 private:
  struct Node {
    Node(Oracle o, Rational m) : oracle(std::move(o)), mag(std::move(m)) {}
    Oracle oracle;
    Rational mag;
    detail::Memo<Precision, Dyadic> memo;
  };

  explicit RealName(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline RealName operator-(const RealName& x) {
  return RealName::from_oracle([x](Precision n) { return -x.approx(n); }, x.mag());
}

inline RealName operator+(const RealName& x, const RealName& y) {
  return RealName::from_oracle(
      [x, y](Precision n) { return (x.approx(n + 2) + y.approx(n + 2)).rounded(n + 1); },
      loosen_up(x.mag() + y.mag()));
}

inline RealName operator-(const RealName& x, const RealName& y) { return x + (-y); }

/// Product. Each factor is queried with ceil(log2(|x|+|y|+2)) + 1 guard bits,
/// which bounds |xy - x'y'| by 2^-(n+1); rounding adds at most 2^-(n+2).
inline RealName operator*(const RealName& x, const RealName& y) {
  std::int64_t guard = ceil_log2(x.mag() + y.mag() + 2) + 1;
  return RealName::from_oracle(
      [x, y, guard](Precision n) {
        auto k = static_cast<Precision>(n + guard);
        return (x.approx(k) * y.approx(k)).rounded(n + 1);
      },
      loosen_up(x.mag() * y.mag()));
}

inline RealName scale(const Rational& c, const RealName& x) { return RealName::exact(c) * x; }

/// 1/x given a witness 0 < w <= |x|.
inline RealName recip(const RealName& x, const Rational& lower_witness) {
  if (lower_witness <= 0) throw std::invalid_argument("recip needs a positive lower witness");
  // |1/x - 1/x'| <= 2^-k * 2/w^2 once 2^-k <= w/2
  std::int64_t extra = std::max<std::int64_t>(ceil_log2(Rational(1) / (lower_witness * lower_witness)) + 2,
                                              ceil_log2(Rational(2) / lower_witness));
  Rational w = lower_witness;
  return RealName::from_oracle(
      [x, extra](Precision n) {
        Dyadic a = x.approx(static_cast<Precision>(n + extra));
        return Dyadic::round_rational(Rational(1) / a.to_rational(), n + 1);
      },
      Rational(1) / w);
}

namespace detail {

/// floor(sqrt(d) * 2^q) * 2^-q for a dyadic d >= 0.
inline Dyadic sqrt_floor(const Dyadic& d, std::int64_t q) {
  if (d.sign() <= 0) return Dyadic();
  // d = m 2^e; sqrt(d) 2^q = sqrt(m 2^(e + 2q))
  std::int64_t e = d.exponent() + 2 * q;
  BigInt m = d.mantissa();
  if (e >= 0) {
    m <<= static_cast<unsigned>(e);
  } else {
    m >>= static_cast<unsigned>(-e);
  }
  return Dyadic(boost::multiprecision::sqrt(m), -q);
}

}  // namespace detail

/**
 * sqrt of a name of a non-negative real. Approximants below zero are clamped,
 * which only moves them closer. When the approximant is clearly away from 0
 * the error divides by sqrt(x); otherwise the query precision is doubled.
 */
inline RealName sqrt_name(const RealName& x) {
  return RealName::from_oracle(
      [x](Precision n) {
        Precision k = n + 4;
        Dyadic a = x.approx(k);
        Dyadic lower = a - Dyadic::pow2(-k);
        // |sqrt(y) - sqrt(x)| <= |y - x| / sqrt(lower); want <= 2^-(n+1)
        bool far = lower.sign() > 0 && Dyadic::pow2(-2 * k) <= lower * Dyadic::pow2(-2 * n - 2);
        if (!far) a = x.approx(2 * n + 2);
        // truncation at 2^-(n+3) plus rounding to the 2^-(n+2) grid: < 2^-(n+1)
        return detail::sqrt_floor(a, n + 3).rounded(n + 2);
      },
      sqrt_upper(x.mag()));
}

/// Limit of a sequence with |s(k) - L| <= 2^-k.
inline RealName limit_fast(std::function<RealName(Precision)> sequence) {
  Rational mag = sequence(0).mag() + 1;
  return RealName::from_oracle([s = std::move(sequence)](Precision n) { return s(n + 1).approx(n + 1); },
                               loosen_up(mag));
}

/// Name of the square of x (x * x).
inline RealName square(const RealName& x) { return x * x; }

}  // namespace certframe
