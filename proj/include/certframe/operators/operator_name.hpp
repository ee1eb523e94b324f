#pragma once

#include "certframe/hilbert/ops.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace certframe {

/**
 * Memoized sequence k -> VectorName. With a length, elements at k >= length
 * are the zero vector and the oracle is never consulted for them.
 */
class VectorSequence {
 public:
  using Oracle = std::function<VectorName(std::size_t)>;

  VectorSequence() : VectorSequence([](std::size_t) { return VectorName::zero(); }, 0) {}
  explicit VectorSequence(Oracle oracle, std::optional<std::size_t> length = std::nullopt)
      : node_(std::make_shared<Node>(std::move(oracle), length)) {}

  static VectorSequence of(std::vector<VectorName> elems) {
    auto shared = std::make_shared<const std::vector<VectorName>>(std::move(elems));
    std::size_t n = shared->size();
    return VectorSequence([shared](std::size_t k) { return (*shared)[k]; }, n);
  }

  VectorName operator()(std::size_t k) const {
    if (node_->length && k >= *node_->length) return VectorName::zero();
    return node_->memo.get(k, [&] { return node_->oracle(k); });
  }

  const std::optional<std::size_t>& length() const { return node_->length; }

 private:
  struct Node {
    Node(Oracle o, std::optional<std::size_t> l) : oracle(std::move(o)), length(l) {}
    Oracle oracle;
    std::optional<std::size_t> length;
    detail::Memo<std::size_t, VectorName> memo;
  };
  std::shared_ptr<const Node> node_;
};

/**
 * Bounded operator on l2 given by its columns U(delta_k) and a rational
 * upper bound on |U|. domain_dim: columns at k >= domain_dim are zero.
 * codomain_dim: every column is supported on the first codomain_dim entries.
 */
class OperatorName {
 public:
  OperatorName(VectorSequence columns, Rational norm_bound, std::optional<std::size_t> domain_dim = std::nullopt,
               std::optional<std::size_t> codomain_dim = std::nullopt)
      : columns_(std::move(columns)), norm_bound_(std::move(norm_bound)), domain_dim_(domain_dim), codomain_dim_(codomain_dim) {
    if (norm_bound_ < 0) throw std::invalid_argument("operator norm bound must be non-negative");
    if (!domain_dim_) domain_dim_ = columns_.length();
  }

  VectorName col(std::size_t k) const {
    if (domain_dim_ && k >= *domain_dim_) return VectorName::zero();
    return columns_(k);
  }

  const Rational& norm_bound() const { return norm_bound_; }
  const std::optional<std::size_t>& domain_dim() const { return domain_dim_; }
  const std::optional<std::size_t>& codomain_dim() const { return codomain_dim_; }
  const VectorSequence& columns() const { return columns_; }

 private:
  VectorSequence columns_;
  Rational norm_bound_;
  std::optional<std::size_t> domain_dim_, codomain_dim_;
};

/**
 * Approximant of U v for a finite dyadic v, within 2^-m: columns are queried
 * at p with sum|v_i| 2^-p <= 2^-(m+1) and the exact sum is rounded within 2^-(m+1).
 */
inline DyadicVector apply_finite(const OperatorName& U, const DyadicVector& v, Precision m) {
  Dyadic l1 = v.abs_sum();
  if (l1.is_zero()) return {};
  auto p = static_cast<Precision>(m + 1 + ceil_log2(l1.to_rational()));
  p = (p + 7) / 8 * 8;  // coarse grid: repeated calls hit the column memos
  std::size_t end = v.size();
  if (U.domain_dim()) end = std::min(end, *U.domain_dim());
  std::vector<std::pair<Dyadic, DyadicVector>> terms;
  for (std::size_t i = 0; i < end; ++i) {
    if (!v[i].is_zero()) terms.emplace_back(v[i], U.col(i).approx(p));
  }
  return combine(terms).rounded_within(m + 1);
}

/**
 * Ux. Half of the 2^-m budget goes to the input: x is replaced by an
 * approximant within 2^-(m+1)/|U|. The other half goes to the finite sum.
 */
inline VectorName apply(const OperatorName& U, const VectorName& x) {
  if (U.norm_bound() == 0) return VectorName::zero();
  std::int64_t input_guard = ceil_log2(U.norm_bound() + 1);
  return VectorName::from_cauchy(
      [U, x, input_guard](Precision m) {
        DyadicVector v = x.approx(static_cast<Precision>(m + 1 + input_guard));
        return apply_finite(U, v, m + 1);
      },
      U.norm_bound() * x.bound());
}

/// U o V
inline OperatorName compose(const OperatorName& U, const OperatorName& V) {
  VectorSequence cols([U, V](std::size_t k) { return apply(U, V.col(k)); }, V.domain_dim());
  return OperatorName(std::move(cols), loosen_up(U.norm_bound() * V.norm_bound()), V.domain_dim(), U.codomain_dim());
}

inline OperatorName identity_operator(std::optional<std::size_t> dim = std::nullopt) {
  return OperatorName(VectorSequence([](std::size_t k) { return VectorName::basis(k); }, dim), Rational(1), dim, dim);
}

inline OperatorName zero_operator() {
  return OperatorName(VectorSequence([](std::size_t) { return VectorName::zero(); }, 0), Rational(0), 0, 0);
}

using RationalMatrix = std::vector<std::vector<Rational>>;

inline void check_matrix(const RationalMatrix& M) {
  if (M.empty() || M.front().empty()) throw std::invalid_argument("empty matrix");
  for (const auto& row : M) {
    if (row.size() != M.front().size()) throw std::invalid_argument("ragged matrix rows");
  }
}

inline Rational frobenius_squared(const RationalMatrix& M) {
  Rational s = 0;
  for (const auto& row : M) {
    for (const auto& e : row) s += e * e;
  }
  return s;
}

inline RationalMatrix transpose(const RationalMatrix& M) {
  check_matrix(M);
  RationalMatrix t(M.front().size(), std::vector<Rational>(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < M[i].size(); ++j) t[j][i] = M[i][j];
  }
  return t;
}

/// Finite r x c matrix acting on span(delta_0..delta_{c-1}); norm bound = Frobenius norm.
inline OperatorName from_finite_matrix(const RationalMatrix& M) {
  check_matrix(M);
  std::size_t rows = M.size(), cols = M.front().size();
  std::vector<VectorName> columns;
  for (std::size_t k = 0; k < cols; ++k) {
    std::vector<Rational> c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = M[i][k];
    columns.push_back(VectorName::from_finite(FiniteVector::dense(c)));
  }
  return OperatorName(VectorSequence::of(std::move(columns)), sqrt_upper(frobenius_squared(M)), cols, rows);
}

/// Square block M on the first d coordinates, identity beyond.
inline OperatorName block_plus_identity(const RationalMatrix& M) {
  check_matrix(M);
  std::size_t d = M.size();
  if (M.front().size() != d) throw std::invalid_argument("block must be square");
  OperatorName block = from_finite_matrix(M);
  VectorSequence cols([block, d](std::size_t k) { return k < d ? block.col(k) : VectorName::basis(k); });
  Rational nb = block.norm_bound();
  if (nb < 1) nb = 1;
  return OperatorName(std::move(cols), nb);
}

/**
 * U* from row data: rows(n) is the full l2 name of (<e_n, U delta_k>)_k,
 * which is the column U*(e_n). Adjoints are never derived automatically.
 */
inline OperatorName banded_adjoint(VectorSequence rows, Rational norm_bound, std::optional<std::size_t> domain_dim = std::nullopt,
                                   std::optional<std::size_t> codomain_dim = std::nullopt) {
  return OperatorName(std::move(rows), std::move(norm_bound), domain_dim, codomain_dim);
}

/// Dyadic approximation of the top-left rows x cols section, entries within 2^-p.
inline std::vector<std::vector<Dyadic>> section(const OperatorName& U, std::size_t rows, std::size_t cols, Precision p) {
  std::vector<std::vector<Dyadic>> m(rows, std::vector<Dyadic>(cols));
  for (std::size_t k = 0; k < cols; ++k) {
    DyadicVector c = U.col(k).approx(p);
    for (std::size_t i = 0; i < rows; ++i) m[i][k] = c.at(i);
  }
  return m;
}

}  // namespace certframe
