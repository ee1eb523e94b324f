#pragma once

#include "certframe/core/numbers.hpp"

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace certframe {

/**
 * Exact dyadic rational mantissa * 2^exponent.
 *
 * Always canonical: the mantissa is odd, or zero with exponent 0. Two equal
 * values therefore have identical fields, which is what makes name queries
 * bit-reproducible.
 */
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt mantissa, std::int64_t exponent) : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
  }
  explicit Dyadic(long long v) : Dyadic(BigInt(v), 0) {}

  static Dyadic pow2(std::int64_t e) { return Dyadic(BigInt(1), e); }

  const BigInt& mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0; }
  int sign() const { return mantissa_ == 0 ? 0 : (mantissa_ < 0 ? -1 : 1); }

  Rational to_rational() const {
    return Rational(mantissa_) * certframe::pow2(exponent_);
  }

  double to_double() const {
    if (is_zero()) return 0.0;
    Dyadic r = rounded(-(log2_floor() - 60));  // keep ~60 significant bits
    return std::ldexp(r.mantissa_.convert_to<double>(), static_cast<int>(r.exponent_));
  }

  /// floor(log2 |x|), x != 0.
  std::int64_t log2_floor() const {
    BigInt a = mantissa_ < 0 ? BigInt(-mantissa_) : mantissa_;
    return msb_of(a) + exponent_;
  }

  Dyadic operator-() const {
    Dyadic r;
    r.mantissa_ = -mantissa_;
    r.exponent_ = exponent_;
    return r;
  }

  friend Dyadic abs(const Dyadic& x) { return x.sign() < 0 ? -x : x; }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.exponent_ <= b.exponent_) {
      return Dyadic(a.mantissa_ + (b.mantissa_ << static_cast<unsigned>(b.exponent_ - a.exponent_)), a.exponent_);
    }
    return Dyadic(b.mantissa_ + (a.mantissa_ << static_cast<unsigned>(a.exponent_ - b.exponent_)), b.exponent_);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero() || b.is_zero()) return Dyadic();
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  /// Multiply by 2^k exactly.
  Dyadic shifted(std::int64_t k) const {
    if (is_zero()) return *this;
    Dyadic r = *this;
    r.exponent_ += k;
    return r;
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    Dyadic d = a - b;
    if (d.sign() < 0) return std::strong_ordering::less;
    if (d.sign() > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Nearest multiple of 2^-n (ties away from zero); error <= 2^-(n+1).
  Dyadic rounded(std::int64_t n) const {
    if (is_zero() || exponent_ >= -n) return *this;
    auto shift = static_cast<unsigned>(-n - exponent_);
    BigInt a = mantissa_ < 0 ? BigInt(-mantissa_) : mantissa_;
    BigInt q = (a + (BigInt(1) << (shift - 1))) >> shift;
    return Dyadic(mantissa_ < 0 ? BigInt(-q) : q, -n);
  }

  /// Nearest multiple of 2^-n to the rational q; error <= 2^-(n+1).
  static Dyadic round_rational(const Rational& q, std::int64_t n) {
    BigInt num = numerator_of(q), den = denominator_of(q);
    if (num == 0) return Dyadic();
    bool neg = num < 0;
    if (neg) num = -num;
    if (n >= 0) {
      num <<= static_cast<unsigned>(n);
    } else {
      den <<= static_cast<unsigned>(-n);
    }
    BigInt r = (2 * num + den) / (2 * den);
    return Dyadic(neg ? BigInt(-r) : r, -n);
  }

  /// Textual form "m*2^e".
  std::string str() const { return mantissa_.str() + "*2^" + std::to_string(exponent_); }

  static Dyadic parse(std::string_view text) {
    auto star = text.find("*2^");
    if (star == std::string_view::npos) throw std::invalid_argument("dyadic must look like m*2^e");
    Rational m = parse_rational(text.substr(0, star));
    if (denominator_of(m) != 1) throw std::invalid_argument("dyadic mantissa must be an integer");
    std::string e(text.substr(star + 3));
    std::size_t used = 0;
    long long exp = std::stoll(e, &used);
    if (used != e.size()) throw std::invalid_argument("bad dyadic exponent '" + e + "'");
    return Dyadic(numerator_of(m), exp);
  }

 private:
  void normalize() {
    if (mantissa_ == 0) {
      exponent_ = 0;
      return;
    }
    BigInt a = mantissa_ < 0 ? BigInt(-mantissa_) : mantissa_;
    auto tz = boost::multiprecision::lsb(a);
    if (tz > 0) {
      mantissa_ >>= tz;  // exact: low bits are zero, sign preserved
      exponent_ += static_cast<std::int64_t>(tz);
    }
  }

  BigInt mantissa_ = 0;
  std::int64_t exponent_ = 0;
};

}  // namespace certframe
