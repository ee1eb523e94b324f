#pragma once

#include "certframe/core/real_name.hpp"

#include <cstdint>
#include <string>

namespace certframe::cli {

/// Least D with 10^D >= 2^(p+1), plus one: rounding to D decimals costs at most 2^-(p+2).
inline int decimal_digits(Precision p) {
  BigInt ten = 1, target = BigInt(1) << (p + 1);
  int d = 0;
  while (ten < target) {
    ten *= 10;
    ++d;
  }
  return d + 1;
}

namespace detail {

inline std::string digits_of(const BigInt& scaled, int digits) {
  BigInt mag = scaled < 0 ? BigInt(-scaled) : scaled;
  std::string s = mag.str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  return (scaled < 0 ? "-" : "") + s;
}

inline BigInt pow10(int digits) {
  BigInt t = 1;
  for (int i = 0; i < digits; ++i) t *= 10;
  return t;
}

}  // namespace detail

/// q rounded to `digits` decimals, ties away from zero.
inline std::string decimal(const Rational& q, int digits) {
  Rational scaled = q * Rational(detail::pow10(digits));
  BigInt num = numerator_of(abs(scaled)), den = denominator_of(scaled);
  BigInt r = (2 * num + den) / (2 * den);
  return detail::digits_of(scaled < 0 ? BigInt(-r) : r, digits);
}

/// Smallest `digits`-decimal number >= q.
inline std::string decimal_up(const Rational& q, int digits) {
  Rational scaled = q * Rational(detail::pow10(digits));
  BigInt num = numerator_of(scaled), den = denominator_of(scaled);
  BigInt f = num / den;  // truncates toward zero
  if (f * den < num) f += 1;
  return detail::digits_of(f, digits);
}

inline std::string annotation(Precision p) { return "± 2^-" + std::to_string(p); }

/// Decimal within 2^-p of the named real, with its annotation.
inline std::string certified(const RealName& x, Precision p) {
  return decimal(x.approx(p + 1).to_rational(), decimal_digits(p)) + " " + annotation(p);
}

/// Decimal within 2^-p of a value already known within 2^-(p+1).
inline std::string certified_from(const Dyadic& v, Precision p) {
  return decimal(v.to_rational(), decimal_digits(p)) + " " + annotation(p);
}

}  // namespace certframe::cli
