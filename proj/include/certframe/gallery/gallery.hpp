#pragma once

#include "certframe/duality/duality.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace certframe::gallery {

using Enumerator = std::function<std::uint64_t(std::size_t)>;

/**
 * Positive sequence (a_i) with a_0 = 1 and sum a_i^2 <= sq_sum_upper < 2.
 * The squares are exact rationals. No norm name: with a left-c.e. square sum
 * the l2 norm exists but need not be computable, so nothing here can build a
 * name that needs it.
 */
class SequenceGen {
 public:
  struct Entry {
    RealName value;
    Rational square;
  };
  using Oracle = std::function<Entry(std::size_t)>;

  SequenceGen(Oracle oracle, Rational sq_sum_upper, Rational abs_sum_upper)
      : node_(std::make_shared<Node>(std::move(oracle))), sq_sum_upper_(std::move(sq_sum_upper)),
        abs_sum_upper_(std::move(abs_sum_upper)) {
    if (sq_sum_upper_ >= 2) throw std::invalid_argument("square sum bound must stay below 2");
  }

  RealName a(std::size_t i) const { return entry(i).value; }
  Rational a_squared(std::size_t i) const { return entry(i).square; }
  const Rational& sq_sum_upper() const { return sq_sum_upper_; }
  /// sum |a_i| <= abs_sum_upper; bounds the Toeplitz operator built from (a_i)
  const Rational& abs_sum_upper() const { return abs_sum_upper_; }

 private:
  Entry entry(std::size_t i) const {
    return node_->memo.get(i, [&] { return node_->oracle(i); });
  }
  struct Node {
    explicit Node(Oracle o) : oracle(std::move(o)) {}
    Oracle oracle;
    detail::Memo<std::size_t, Entry> memo;
  };
  std::shared_ptr<const Node> node_;
  Rational sq_sum_upper_, abs_sum_upper_;
};

/// A SequenceGen together with a name of |(a_i)|.
class NormedSequence : public SequenceGen {
 public:
  NormedSequence(SequenceGen g, RealName norm) : SequenceGen(std::move(g)), norm_(std::move(norm)) {}
  const RealName& norm_name() const { return norm_; }

 private:
  RealName norm_;
};

/// a_i = 2^-i, |a|^2 = 4/3.
inline NormedSequence benign_sequence() {
  SequenceGen g(
      [](std::size_t i) {
        auto e = static_cast<std::int64_t>(i);
        return SequenceGen::Entry{RealName::exact(Dyadic::pow2(-e)), pow2(-2 * e)};
      },
      Rational(4, 3), Rational(2));
  return NormedSequence(std::move(g), sqrt_name(RealName::exact(Rational(4, 3))));
}

/**
 * a_0 = 1, a_{j+1}^2 = 2^-(w_j + 2) for an injective enumeration (w_j).
 * The square sum is 1 + sum_j 2^-(w_j+2) <= 3/2. Repeated values are caught
 * when the offending entry is first requested.
 */
inline SequenceGen specker_sequence(Enumerator enumerate) {
  struct Seen {
    std::mutex mutex;
    std::vector<std::uint64_t> values;
    std::set<std::uint64_t> set;
  };
  auto seen = std::make_shared<Seen>();
  auto value_at = [seen, enumerate](std::size_t j) {
    std::lock_guard lock(seen->mutex);
    while (seen->values.size() <= j) {
      std::size_t k = seen->values.size();
      std::uint64_t w = enumerate(k);
      if (!seen->set.insert(w).second) {
        throw std::invalid_argument("enumerator repeats value " + std::to_string(w) + " at step " + std::to_string(k));
      }
      seen->values.push_back(w);
    }
    return seen->values[j];
  };
  return SequenceGen(
      [value_at](std::size_t i) {
        if (i == 0) return SequenceGen::Entry{RealName::integer(1), Rational(1)};
        std::uint64_t w = value_at(i - 1);
        auto e = static_cast<std::int64_t>(w) + 2;
        Rational sq = pow2(-e);
        RealName v = e % 2 == 0 ? RealName::exact(Dyadic::pow2(-e / 2)) : sqrt_name(RealName::exact(Dyadic::pow2(-e)));
        return SequenceGen::Entry{v, sq};
      },
      Rational(3, 2), Rational(11, 4));
}

/**
 * Enumerator specs: "id" (j), "affine:a:b" (a j + b), "squares" (j^2),
 * "list:v0,v1,..." (the listed values, then max+1, max+2, ...).
 */
inline Enumerator parse_enumerator(std::string_view spec) {
  auto to_u64 = [&](std::string_view s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw std::invalid_argument("bad number '" + std::string(s) + "' in enumerator spec");
    }
    return static_cast<std::uint64_t>(std::stoull(std::string(s)));
  };
  if (spec == "id") return [](std::size_t j) { return static_cast<std::uint64_t>(j); };
  if (spec == "squares") return [](std::size_t j) { return static_cast<std::uint64_t>(j) * j; };
  if (spec.substr(0, 7) == "affine:") {
    auto rest = spec.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("affine enumerator needs a:b");
    std::uint64_t a = to_u64(rest.substr(0, colon)), b = to_u64(rest.substr(colon + 1));
    return [a, b](std::size_t j) { return a * j + b; };
  }
  if (spec.substr(0, 5) == "list:") {
    std::vector<std::uint64_t> values;
    std::string_view rest = spec.substr(5);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      values.push_back(to_u64(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
    }
    if (values.empty()) throw std::invalid_argument("empty enumerator list");
    std::uint64_t next = *std::max_element(values.begin(), values.end()) + 1;
    return [values, next](std::size_t j) { return j < values.size() ? values[j] : next + (j - values.size()); };
  }
  throw std::invalid_argument("unknown enumerator spec '" + std::string(spec) + "'");
}

// ---- bounds ---------------------------------------------------------------

/**
 * Upper bound on the largest eigenvalue of (I + e a'^T)(I + a' e^T) with
 * e a unit vector orthogonal to a' and |a'|^2 = s <= sq_sum_upper - 1. On
 * span(e, a') the matrix is [[1+s, sqrt s], [sqrt s, 1]] with determinant 1,
 * so lambda_max = ((2+s) + sqrt((2+s)^2 - 4))/2 and lambda_min = 1/lambda_max.
 */
inline Rational rank_one_lambda_max_upper(const SequenceGen& g) {
  Rational t = g.sq_sum_upper() + 1;  // 2 + s
  return loosen_up((t + sqrt_upper(t * t - 4)) / 2);
}

// ---- ex3.7 shape: first row (1, a_1, a_2, ...) ----------------------

/// Columns U delta_0 = delta_0, U delta_i = a_i delta_0 + delta_i; |U| <= 1 + |a| < 3.
inline OperatorName example_upper_row(const SequenceGen& g) {
  VectorSequence cols([g](std::size_t i) {
    if (i == 0) return VectorName::basis(0);
    std::vector<RealName> entries(i + 1, RealName::integer(0));
    entries[0] = g.a(i);
    entries[i] = RealName::integer(1);
    return VectorName::from_reals(std::move(entries));
  });
  return OperatorName(std::move(cols), Rational(3));
}

/// The frame (U delta_i): computable for every g, bounds from the rank-one analysis.
inline Frame ex37_frame(const SequenceGen& g) {
  Rational B = rank_one_lambda_max_upper(g);
  return Frame(example_upper_row(g).columns(), Rational(1) / B, B);
}

/// T* = U*: T*(e_0) = (a_i) needs |a|, T*(e_n) = e_n otherwise.
inline CertifiedFrame ex37_certified(const NormedSequence& g) {
  Rational B = rank_one_lambda_max_upper(g);
  SequenceGen base = g;
  RealName norm = g.norm_name();
  VectorSequence cols([base, norm](std::size_t n) {
    if (n > 0) return VectorName::basis(n);
    return VectorName::from_fourier([base](std::size_t i) { return base.a(i); }, norm);
  });
  return CertifiedFrame(ex37_frame(g), OperatorName(std::move(cols), sqrt_upper(B)));
}

// ---- lower shapes: ex3.14, ex3.20, ex3.27 ---------------------------------

/**
 * Row/column data available from any SequenceGen. Everything here is either
 * finite (hence a full name) or only coefficientwise (WeakVectorName).
 */
struct LowerShapes {
  OperatorName ex314_adjoint;                           // U* for first column (1, a_1, ...)
  std::function<WeakVectorName(std::size_t)> ex314_columns;  // f_n = U delta_n
  OperatorName ex320_operator;                          // U with row 1 = (0, 1, a_1, ...)
  std::function<WeakVectorName(std::size_t)> ex320_rows;     // U*(e_n)
  OperatorName ex327_adjoint;                           // rows (a_n, ..., a_1, 1, 0, ...)
  std::function<WeakVectorName(std::size_t)> ex327_columns;  // g_i = (0, .., 0, 1, a_1, ...)
  VectorSequence ex327_literal_dual;                    // (-a_i, ..., -a_1, 1, 0, ...)
  VectorSequence ex327_inverse_dual;                    // rows of U^-1
};

/// Coefficients b of 1/a(z): b_0 = 1, b_k = -sum_{j=1..k} a_j b_{k-j}.
inline std::function<RealName(std::size_t)> inverse_symbol(const SequenceGen& g) {
  auto memo = std::make_shared<detail::Memo<std::size_t, RealName>>();
  auto self = std::make_shared<std::function<RealName(std::size_t)>>();
  std::weak_ptr<std::function<RealName(std::size_t)>> weak = self;
  *self = [g, memo, weak](std::size_t k) -> RealName {
    return memo->get(k, [&] {
      if (k == 0) return RealName::integer(1);
      auto rec = weak.lock();
      RealName s = RealName::integer(0);
      for (std::size_t j = 1; j <= k; ++j) s = s + g.a(j) * (*rec)(k - j);
      return -s;
    });
  };
  return [self](std::size_t k) { return (*self)(k); };
}

inline LowerShapes example_lower_column(const SequenceGen& g) {
  Rational B = rank_one_lambda_max_upper(g);
  Rational root_a = sqrt_upper(g.sq_sum_upper());

  VectorSequence adj314([g](std::size_t n) {
    if (n == 0) return VectorName::basis(0);
    std::vector<RealName> e(n + 1, RealName::integer(0));
    e[0] = g.a(n);
    e[n] = RealName::integer(1);
    return VectorName::from_reals(std::move(e));
  });
  auto cols314 = [g, root_a](std::size_t n) {
    if (n > 0) return WeakVectorName([n](std::size_t i) { return RealName::integer(i == n ? 1 : 0); }, Rational(1));
    return WeakVectorName([g](std::size_t i) { return g.a(i); }, root_a);
  };

  VectorSequence cols320([g](std::size_t k) {
    if (k < 2) return VectorName::basis(k);
    std::vector<RealName> e(k + 1, RealName::integer(0));
    e[1] = g.a(k - 1);
    e[k] = RealName::integer(1);
    return VectorName::from_reals(std::move(e));
  });
  auto rows320 = [g, root_a](std::size_t n) {
    if (n != 1) return WeakVectorName([n](std::size_t k) { return RealName::integer(k == n ? 1 : 0); }, Rational(1));
    return WeakVectorName([g](std::size_t k) { return k == 0 ? RealName::integer(0) : g.a(k - 1); }, root_a);
  };

  VectorSequence adj327([g](std::size_t n) {
    std::vector<RealName> e;
    for (std::size_t k = 0; k <= n; ++k) e.push_back(g.a(n - k));
    return VectorName::from_reals(std::move(e));
  });
  auto cols327 = [g, root_a](std::size_t i) {
    return WeakVectorName([g, i](std::size_t m) { return m < i ? RealName::integer(0) : g.a(m - i); }, root_a);
  };
  VectorSequence literal([g](std::size_t i) {
    std::vector<RealName> e;
    for (std::size_t j = 0; j < i; ++j) e.push_back(-g.a(i - j));
    e.push_back(RealName::integer(1));
    return VectorName::from_reals(std::move(e));
  });
  auto b = inverse_symbol(g);
  VectorSequence inverse([b](std::size_t i) {
    std::vector<RealName> e;
    for (std::size_t j = 0; j <= i; ++j) e.push_back(b(i - j));
    return VectorName::from_reals(std::move(e));
  });

  return LowerShapes{OperatorName(std::move(adj314), sqrt_upper(B)),
                     cols314,
                     OperatorName(std::move(cols320), sqrt_upper(B)),
                     rows320,
                     OperatorName(std::move(adj327), g.abs_sum_upper()),
                     cols327,
                     std::move(literal),
                     std::move(inverse)};
}

/// Frame f_n = U delta_n with first column (1, a_1, ...), recovered from T* = U* and the norms.
inline CertifiedFrame ex314_frame(const NormedSequence& g) {
  Rational B = rank_one_lambda_max_upper(g);
  RealName norm = g.norm_name();
  return frame_from_analysis(example_lower_column(g).ex314_adjoint,
                             [norm](std::size_t i) { return i == 0 ? norm : RealName::integer(1); }, Rational(1) / B, B);
}

/// phi_n = U*(delta_n) for the row-1 shape, with T_phi* = U as certificate.
inline CertifiedFrame ex320_frame(const NormedSequence& g) {
  Rational B = rank_one_lambda_max_upper(g);
  SequenceGen base = g;
  RealName norm = g.norm_name();
  VectorSequence rows([base, norm](std::size_t n) {
    if (n != 1) return VectorName::basis(n);
    // (0, 1, a_1, a_2, ...) has norm |a|
    return VectorName::from_fourier([base](std::size_t k) { return k == 0 ? RealName::integer(0) : base.a(k - 1); }, norm);
  });
  Frame phi = frame_from_coeff_operator(frame_from_onb(), std::move(rows), Rational(1) / B, B);
  return CertifiedFrame(std::move(phi), example_lower_column(g).ex320_operator);
}

/// g_i = U delta_i for the lower-triangular Toeplitz U; the lower bound is the caller's.
inline CertifiedFrame ex327_frame(const NormedSequence& g, const Rational& lower) {
  SequenceGen base = g;
  RealName norm = g.norm_name();
  VectorSequence elems([base, norm](std::size_t i) {
    return VectorName::from_fourier([base, i](std::size_t m) { return m < i ? RealName::integer(0) : base.a(m - i); }, norm);
  });
  Rational B = g.abs_sum_upper() * g.abs_sum_upper();
  return CertifiedFrame(Frame(std::move(elems), lower, B), example_lower_column(g).ex327_adjoint);
}

/// For a_i = 2^-i: |U| = a(1) = 2 and |U^-1| = sup |1 - z/2| = 3/2, so A = 4/9.
inline Rational ex327_benign_lower() { return Rational(4, 9); }

// ---- instances addressable by name ----------------------------------------

struct Instance {
  std::string name;
  bool benign = false;
  std::optional<Frame> frame;               // absent when the elements are not computable
  std::optional<CertifiedFrame> certified;  // absent without an analysis certificate
  std::optional<OperatorName> analysis_op;  // computable T*, possibly without a computable frame
  std::string note;
};

/// name: ex3.7 | ex3.14 | ex3.20 | ex3.27; params: "benign" | "specker:<enumerator>".
inline Instance make_instance(std::string_view name, std::string_view params) {
  Instance out;
  out.name = std::string(name);
  std::optional<NormedSequence> normed;
  std::optional<SequenceGen> plain;
  if (params == "benign") {
    normed = benign_sequence();
    out.benign = true;
  } else if (params.substr(0, 8) == "specker:") {
    plain = specker_sequence(parse_enumerator(params.substr(8)));
  } else {
    throw std::invalid_argument("gallery params must be 'benign' or 'specker:<enumerator>'");
  }
  const SequenceGen& g = normed ? static_cast<const SequenceGen&>(*normed) : *plain;
  const std::string missing = "the l2 norm of (a_i) is not available, so no name of it can be formed";

  if (name == "ex3.7") {
    out.frame = ex37_frame(g);
    if (normed) {
      out.certified = ex37_certified(*normed);
      out.analysis_op = out.certified->analysis_op();
    } else {
      out.note = "the analysis operator T* is not computable: T*(e_0) = (a_i) and " + missing;
    }
  } else if (name == "ex3.14") {
    out.analysis_op = example_lower_column(g).ex314_adjoint;
    if (normed) {
      out.certified = ex314_frame(*normed);
      out.frame = out.certified->frame();
    } else {
      out.note = "the analysis operator is computable but f_0 = (1, a_1, a_2, ...) is not: " + missing;
    }
  } else if (name == "ex3.20") {
    out.analysis_op = example_lower_column(g).ex320_operator;
    if (normed) {
      out.certified = ex320_frame(*normed);
      out.frame = out.certified->frame();
    } else {
      out.note = "phi_1 = (0, 1, a_1, a_2, ...) is not computable: U* has no computable row data and " + missing;
    }
  } else if (name == "ex3.27") {
    out.analysis_op = example_lower_column(g).ex327_adjoint;
    if (normed) {
      out.certified = ex327_frame(*normed, ex327_benign_lower());
      out.frame = out.certified->frame();
    } else {
      out.note = "g_i = (0, ..., 0, 1, a_1, a_2, ...) is not computable: " + missing;
    }
  } else {
    throw std::invalid_argument("unknown gallery instance '" + std::string(name) + "'");
  }
  return out;
}

}  // namespace certframe::gallery
