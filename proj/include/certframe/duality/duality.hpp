#pragma once

#include "certframe/frames/representation.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace certframe {

/// (h_k) with sum_k <f, h_k>^2 <= D |f|^2; D is caller-supplied.
class BesselSequence {
 public:
  BesselSequence(VectorSequence elems, Rational bessel_bound) : elems_(std::move(elems)), bound_(std::move(bessel_bound)) {
    if (bound_ < 0) throw std::invalid_argument("Bessel bound must be non-negative");
  }
  VectorName elem(std::size_t k) const { return elems_(k); }
  const VectorSequence& elems() const { return elems_; }
  const Rational& bessel_bound() const { return bound_; }

  static BesselSequence zero() { return BesselSequence(VectorSequence(), Rational(0)); }

 private:
  VectorSequence elems_;
  Rational bound_;
};

/// A certified frame (f_k) and a dual (g_k): f = sum <f, g_k> f_k.
struct DualPair {
  CertifiedFrame primal;
  Frame dual;
  std::optional<OperatorName> dual_analysis;  // T_g*, when available
};

class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, Rational worst) : std::runtime_error(what), worst_(std::move(worst)) {}
  const Rational& worst_residual() const { return worst_; }

 private:
  Rational worst_;
};

/// Canonical dual (S^-1 f_k) with bounds (1/B, 1/A) and analysis operator T* S^-1.
inline CertifiedFrame canonical_dual(const CertifiedFrame& CF) {
  Frame dual(CF.dual_elems(), Rational(1) / CF.upper(), Rational(1) / CF.lower(), CF.frame().space_dim());
  VectorSequence cols(
      [CF](std::size_t n) { return analysis(CF, inverse_frame_operator(CF, VectorName::basis(n))); },
      CF.frame().space_dim());
  OperatorName Tstar(std::move(cols), loosen_up(sqrt_upper(CF.upper()) / CF.lower()), CF.frame().space_dim(),
                     CF.frame().length());
  return CertifiedFrame(std::move(dual), std::move(Tstar));
}

inline DualPair canonical_pair(const CertifiedFrame& CF) {
  CertifiedFrame d = canonical_dual(CF);
  return DualPair{CF, d.frame(), d.analysis_op()};
}

/// Upper bound on |x| from a name, read at precision p.
inline Rational norm_upper_bound(const VectorName& x, Precision p) {
  return x.norm().approx(p).to_rational() + pow2(-p);
}

/// Built-in test set: the first min(dim, 4) basis vectors and two fixed combinations.
inline std::vector<FiniteVector> builtin_test_vectors(std::optional<std::size_t> dim) {
  std::size_t d = dim ? *dim : 4;
  std::vector<FiniteVector> tests;
  for (std::size_t i = 0; i < std::min<std::size_t>(d, 4); ++i) tests.push_back(FiniteVector({{i, Rational(1)}}));
  std::vector<FiniteVector::Entry> a, b;
  for (std::size_t i = 0; i < std::min<std::size_t>(d, 6); ++i) {
    a.emplace_back(i, Rational(i % 2 ? -1 : 1, static_cast<long long>(i + 1)));
    b.emplace_back(i, Rational(static_cast<long long>(2 * i + 1), 3));
  }
  tests.emplace_back(std::move(a));
  tests.emplace_back(std::move(b));
  return tests;
}

/**
 * Dual (V delta_k) from a left inverse V of T*. V T* = I is the caller's
 * claim; it is checked on the built-in test set to 2^-30 and a
 * VerificationError carries the worst residual otherwise.
 */
inline DualPair dual_from_left_inverse(const CertifiedFrame& CF, const OperatorName& V) {
  const Precision p = 34;
  const Rational tol = pow2(-30);
  Rational worst = 0;
  for (const auto& t : builtin_test_vectors(CF.frame().space_dim())) {
    VectorName f = VectorName::from_finite(t);
    Rational res = norm_upper_bound(apply(V, analysis(CF, f)) - f, p);
    if (res > worst) worst = res;
  }
  if (worst > tol) {
    throw VerificationError("V is not a left inverse of the analysis operator (residual " + to_string(worst) + ")", worst);
  }
  Rational lower = Rational(1) / CF.upper();
  Rational upper = V.norm_bound() * V.norm_bound();
  if (upper < lower) upper = lower;
  Frame dual(V.columns(), lower, upper, CF.frame().space_dim());
  return DualPair{CF, std::move(dual), std::nullopt};
}

/**
 * g_k = S^-1 f_k + h_k - sum_j <S^-1 f_k, f_j> h_j. Bounds: every dual of a
 * frame with upper bound B has lower bound 1/B; the upper bound follows from
 * g = (T~ + W(I - P)) delta with |T~| <= 1/sqrt(A), |W| <= sqrt(D).
 */
inline DualPair dual_from_bessel(const CertifiedFrame& CF, const BesselSequence& h) {
  OperatorName W(h.elems(), sqrt_upper(h.bessel_bound()), CF.frame().length(), CF.frame().space_dim());
  auto elems = VectorSequence(
      [CF, W, h](std::size_t k) {
        VectorName dk = CF.dual_elem(k);
        VectorName row = analysis(CF, dk);  // (<S^-1 f_k, f_j>)_j
        return linear_combo({{RealName::integer(1), dk},
                             {RealName::integer(1), h.elem(k)},
                             {RealName::integer(-1), apply(W, row)}});
      },
      CF.frame().length());
  Rational s = sqrt_upper(Rational(1) / CF.lower()) + sqrt_upper(h.bessel_bound());
  Frame dual(std::move(elems), Rational(1) / CF.upper(), loosen_up(s * s), CF.frame().space_dim());
  return DualPair{CF, std::move(dual), std::nullopt};
}

struct DualityCase {
  FiniteVector f;
  std::optional<Rational> residual;  // |f - sum <f, g_i> f_i| (upper bound), when computable
  Rational symmetric_residual;       // |f - sum <f, f_i> g_i| (upper bound)
  bool passed = false;
};

struct DualityReport {
  std::vector<DualityCase> cases;
  Rational worst = 0;
  bool passed = true;
};

/**
 * Checks f = sum <f, g_i> f_i on each test vector. The coefficients
 * (<f, g_i>) form a full l2 name when the dual has finite length or an
 * analysis operator; otherwise only the symmetric form is computed. Every
 * computed residual bound must be <= tol.
 */
inline DualityReport verify_duality(const DualPair& pair, const std::vector<FiniteVector>& tests, const Rational& tol) {
  const auto p = static_cast<Precision>(std::max<std::int64_t>(ceil_log2(Rational(1) / tol) + 4, 4));
  const CertifiedFrame& CF = pair.primal;
  OperatorName G(pair.dual.elems(), sqrt_upper(pair.dual.upper()), pair.dual.length(), pair.dual.space_dim());
  DualityReport report;
  for (const auto& t : tests) {
    VectorName f = VectorName::from_finite(t);
    DualityCase c{t, std::nullopt, Rational(0), false};

    std::optional<VectorName> coeffs;
    if (pair.dual_analysis) {
      coeffs = apply(*pair.dual_analysis, f);
    } else if (pair.dual.length()) {
      std::vector<RealName> entries;
      for (std::size_t i = 0; i < *pair.dual.length(); ++i) entries.push_back(inner(f, pair.dual.elem(i)));
      coeffs = VectorName::from_reals(std::move(entries));
    }
    if (coeffs) c.residual = norm_upper_bound(synthesis(CF.frame(), *coeffs) - f, p);
    c.symmetric_residual = norm_upper_bound(apply(G, analysis(CF, f)) - f, p);

    Rational worst_here = c.symmetric_residual;
    if (c.residual && *c.residual > worst_here) worst_here = *c.residual;
    c.passed = worst_here <= tol;
    if (worst_here > report.worst) report.worst = worst_here;
    report.passed = report.passed && c.passed;
    report.cases.push_back(std::move(c));
  }
  return report;
}

/**
 * U_phi on l2 with entries u_lk = <phi_l, S^-1 f_k>: column k is the
 * analysis of S^-1 f_k by Phi. s bounds |U_phi| (caller-supplied).
 */
inline OperatorName cross_gram_operator(const CertifiedFrame& F, const CertifiedFrame& Phi, const Rational& s) {
  if (s <= 0) throw std::invalid_argument("cross_gram_operator needs a positive norm bound");
  VectorSequence cols([F, Phi](std::size_t k) { return analysis(Phi, F.dual_elem(k)); }, F.frame().length());
  return OperatorName(std::move(cols), s, F.frame().length(), Phi.frame().length());
}

/**
 * phi_n = sum_k u_nk f_k from the rows n -> U*(e_n) = (u_nk)_k. That (phi_n)
 * is a frame with the given bounds is the caller's certificate.
 */
inline Frame frame_from_coeff_operator(const CertifiedFrame& F, VectorSequence adjoint_rows, Rational lower, Rational upper) {
  Frame base = F.frame();
  VectorSequence elems([base, adjoint_rows](std::size_t n) { return synthesis(base, adjoint_rows(n)); },
                       adjoint_rows.length());
  return Frame(std::move(elems), std::move(lower), std::move(upper), base.space_dim());
}

}  // namespace certframe
