#pragma once

#include "certframe/core/dyadic.hpp"
#include "certframe/core/numbers.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace certframe {

/**
 * Dense finitely supported vector with exact dyadic entries, indices
 * [0, size()). The approximants of every vector name have this form.
 */
class DyadicVector {
 public:
  DyadicVector() = default;
  explicit DyadicVector(std::vector<Dyadic> entries) : entries_(std::move(entries)) { trim(); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Dyadic& operator[](std::size_t i) const { return entries_[i]; }
  Dyadic at(std::size_t i) const { return i < entries_.size() ? entries_[i] : Dyadic(); }
  const std::vector<Dyadic>& entries() const { return entries_; }

  /// this += c * v
  void axpy(const Dyadic& c, const DyadicVector& v) {
    if (c.is_zero()) return;
    if (v.size() > entries_.size()) entries_.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v.entries_[i].is_zero()) entries_[i] += c * v.entries_[i];
    }
    trim();
  }

  void add(const DyadicVector& v) { axpy(Dyadic(1), v); }

  void set(std::size_t i, Dyadic value) {
    if (i >= entries_.size()) entries_.resize(i + 1);
    entries_[i] = std::move(value);
    trim();
  }

  /// Keep only indices < n.
  DyadicVector truncated(std::size_t n) const {
    if (n >= entries_.size()) return *this;
    return DyadicVector(std::vector<Dyadic>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  /// Zero the first n entries.
  DyadicVector tail_from(std::size_t n) const {
    DyadicVector r = *this;
    for (std::size_t i = 0; i < std::min(n, r.entries_.size()); ++i) r.entries_[i] = Dyadic();
    r.trim();
    return r;
  }

  Dyadic dot(const DyadicVector& o) const {
    Dyadic s;
    for (std::size_t i = 0; i < std::min(size(), o.size()); ++i) s += entries_[i] * o.entries_[i];
    return s;
  }

  Dyadic norm_squared() const { return dot(*this); }

  /// Sum of absolute values (l1 norm), exact.
  Dyadic abs_sum() const {
    Dyadic s;
    for (const auto& e : entries_) s += abs(e);
    return s;
  }

  /**
   * Round every entry to a common grid so that the l2 rounding error is at
   * most 2^-budget. Mantissas stay proportional to the requested precision.
   */
  DyadicVector rounded_within(std::int64_t budget) const {
    if (entries_.empty()) return *this;
    // sqrt(size) * 2^-(q+1) <= 2^-budget
    std::int64_t half_log = (msb_of(BigInt(entries_.size())) + 2) / 2;
    std::int64_t q = budget + half_log;
    std::vector<Dyadic> r;
    r.reserve(entries_.size());
    for (const auto& e : entries_) r.push_back(e.rounded(q));
    return DyadicVector(std::move(r));
  }

  friend bool operator==(const DyadicVector&, const DyadicVector&) = default;

 private:
  void trim() {
    while (!entries_.empty() && entries_.back().is_zero()) entries_.pop_back();
  }

  std::vector<Dyadic> entries_;
};

/// sum_i c_i v_i, exact. Accumulates on one common grid instead of entry by entry.
inline DyadicVector combine(const std::vector<std::pair<Dyadic, DyadicVector>>& terms) {
  std::size_t len = 0;
  std::int64_t E = 0;
  bool any = false;
  for (const auto& [c, v] : terms) {
    if (c.is_zero()) continue;
    for (const auto& e : v.entries()) {
      if (e.is_zero()) continue;
      std::int64_t x = c.exponent() + e.exponent();
      E = any ? std::min(E, x) : x;
      any = true;
    }
    len = std::max(len, v.size());
  }
  if (!any) return {};
  std::vector<BigInt> acc(len);
  BigInt t;
  for (const auto& [c, v] : terms) {
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Dyadic& e = v[j];
      if (e.is_zero()) continue;
      t = c.mantissa() * e.mantissa();
      t <<= static_cast<unsigned>(c.exponent() + e.exponent() - E);
      acc[j] += t;
    }
  }
  std::vector<Dyadic> out;
  out.reserve(len);
  for (auto& a : acc) out.emplace_back(std::move(a), E);
  return DyadicVector(std::move(out));
}

/**
 * Sparse, exact, finitely supported vector with rational entries.
 * Textual form: whitespace-separated `index:rational` pairs, ascending.
 */
class FiniteVector {
 public:
  using Entry = std::pair<std::size_t, Rational>;

  FiniteVector() = default;
  explicit FiniteVector(std::vector<Entry> entries) : entries_(std::move(entries)) { canonicalize(); }

  /// Dense constructor: entries[i] becomes coordinate i.
  static FiniteVector dense(const std::vector<Rational>& values) {
    std::vector<Entry> e;
    for (std::size_t i = 0; i < values.size(); ++i) e.emplace_back(i, values[i]);
    return FiniteVector(std::move(e));
  }

  static FiniteVector from_dyadic(const DyadicVector& v) {
    std::vector<Entry> e;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_zero()) e.emplace_back(i, v[i].to_rational());
    }
    return FiniteVector(std::move(e));
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// One past the largest index with a non-zero entry.
  std::size_t support_end() const { return entries_.empty() ? 0 : entries_.back().first + 1; }

  Rational at(std::size_t i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, std::size_t k) { return e.first < k; });
    return (it != entries_.end() && it->first == i) ? it->second : Rational(0);
  }

  std::vector<Rational> to_dense(std::size_t n) const {
    std::vector<Rational> r(n);
    for (const auto& [i, v] : entries_) {
      if (i < n) r[i] = v;
    }
    return r;
  }

  Rational norm_squared() const {
    Rational s = 0;
    for (const auto& e : entries_) s += e.second * e.second;
    return s;
  }

  /// Entrywise rounding to dyadics within 2^-budget in l2.
  DyadicVector approximate(std::int64_t budget) const {
    std::int64_t half_log = (msb_of(BigInt(entries_.size() + 1)) + 2) / 2;
    std::vector<Dyadic> d(support_end());
    for (const auto& [i, v] : entries_) d[i] = Dyadic::round_rational(v, budget + half_log);
    return DyadicVector(std::move(d));
  }

  std::string str() const {
    std::string out;
    for (const auto& [i, v] : entries_) {
      if (!out.empty()) out += ' ';
      out += std::to_string(i) + ":" + to_string(v);
    }
    return out;
  }

  /// Accepts pairs separated by whitespace or commas.
  static FiniteVector parse(std::string_view text) {
    std::vector<Entry> e;
    std::string token;
    auto flush = [&] {
      if (token.empty()) return;
      auto colon = token.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("expected index:value, got '" + token + "'");
      std::string idx = token.substr(0, colon);
      if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw std::invalid_argument("bad index in '" + token + "'");
      }
      std::size_t i = std::stoull(idx);
      if (!e.empty() && e.back().first >= i) throw std::invalid_argument("indices must be strictly ascending");
      e.emplace_back(i, parse_rational(token.substr(colon + 1)));
      token.clear();
    };
    for (char c : text) {
      if (c == ' ' || c == ',' || c == '\t' || c == '\n') {
        flush();
      } else {
        token += c;
      }
    }
    flush();
    return FiniteVector(std::move(e));
  }

  friend bool operator==(const FiniteVector&, const FiniteVector&) = default;

 private:
  void canonicalize() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].first == entries_[i - 1].first) throw std::invalid_argument("duplicate index in finite vector");
    }
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
  }

  std::vector<Entry> entries_;
};

}  // namespace certframe
