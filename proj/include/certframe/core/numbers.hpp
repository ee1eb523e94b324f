#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace certframe {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// 2^e as an exact rational (any sign of e).
inline Rational pow2(std::int64_t e) {
  BigInt one = 1;
  if (e >= 0) return Rational(one << static_cast<unsigned>(e));
  return Rational(BigInt(1), BigInt(one << static_cast<unsigned>(-e)));
}

/// Index of the most significant bit of a positive integer.
inline std::int64_t msb_of(const BigInt& v) {
  return static_cast<std::int64_t>(boost::multiprecision::msb(v));
}

/// Smallest k with q <= 2^k, for q > 0.
inline std::int64_t ceil_log2(const Rational& q) {
  if (q <= 0) throw std::invalid_argument("ceil_log2 of a non-positive rational");
  std::int64_t k = msb_of(numerator_of(q)) - msb_of(denominator_of(q)) + 1;
  // k is now within one of the answer; settle it exactly.
  while (q <= pow2(k - 1)) --k;
  while (q > pow2(k)) ++k;
  return k;
}

/// Largest k with 2^k <= q, for q > 0.
inline std::int64_t floor_log2(const Rational& q) {
  std::int64_t k = ceil_log2(q);
  return q == pow2(k) ? k : k - 1;
}

/// Rational upper bound of sqrt(q), exact when q is the square of a rational.
/// Otherwise the bound exceeds sqrt(q) by at most 2^-bits relative.
inline Rational sqrt_upper(const Rational& q, unsigned bits = 40) {
  if (q < 0) throw std::invalid_argument("sqrt_upper of a negative rational");
  if (q == 0) return Rational(0);
  BigInt n = numerator_of(q), d = denominator_of(q);
  BigInt rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(d);
  if (rn * rn == n && rd * rd == d) return Rational(rn, rd);
  // sqrt(n/d) = sqrt(n*d)/d; scale so the integer root carries enough bits.
  std::int64_t shift = static_cast<std::int64_t>(bits) - msb_of(n * d) / 2;
  if (shift < 0) shift = 0;
  BigInt scaled = (n * d) << static_cast<unsigned>(2 * shift);
  BigInt root = boost::multiprecision::sqrt(scaled);
  if (root * root != scaled) root += 1;
  return Rational(root, d << static_cast<unsigned>(shift));
}

/// Rational lower bound of sqrt(q) (floor counterpart of sqrt_upper).
inline Rational sqrt_lower(const Rational& q, unsigned bits = 40) {
  if (q < 0) throw std::invalid_argument("sqrt_lower of a negative rational");
  if (q == 0) return Rational(0);
  BigInt n = numerator_of(q), d = denominator_of(q);
  std::int64_t shift = static_cast<std::int64_t>(bits) - msb_of(n * d) / 2;
  if (shift < 0) shift = 0;
  BigInt scaled = (n * d) << static_cast<unsigned>(2 * shift);
  return Rational(boost::multiprecision::sqrt(scaled), d << static_cast<unsigned>(shift));
}

/// Replace q >= 0 by a dyadic upper bound with about `bits` significant bits.
/// Keeps chained magnitude bounds from growing huge denominators.
inline Rational loosen_up(const Rational& q, unsigned bits = 48) {
  if (q <= 0) return q;
  std::int64_t e = ceil_log2(q) - static_cast<std::int64_t>(bits);
  Rational scaled = q / pow2(e);
  BigInt n = numerator_of(scaled), d = denominator_of(scaled);
  BigInt c = n / d;
  if (c * d != n) c += 1;
  return Rational(c) * pow2(e);
}

/// Parse "p/q", "p" or a plain decimal "1.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto parse_int = [](std::string_view s) -> BigInt {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("missing digits");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad digit in '" + std::string(s) + "'");
      v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt p = parse_int(trim(text.substr(0, slash)));
    BigInt q = parse_int(trim(text.substr(slash + 1)));
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot), frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_int(whole);
    if (w < 0) w = -w;
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    if (f < 0) throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    Rational v = Rational(w) + Rational(f, scale);
    return neg ? Rational(-v) : v;
  }
  return Rational(parse_int(text));
}

inline std::string to_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

}  // namespace certframe
