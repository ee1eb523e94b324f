#pragma once

#include "certframe/frames/frame.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

namespace certframe {

/**
 * Name of f in the frame representation: the frame coefficients
 * c_k = <f, S^-1 f_k> and their energy sum_k c_k^2. Backed by the l2 name
 * of (c_k), whose squared norm is the energy.
 */
class FrameCoeffName {
 public:
  explicit FrameCoeffName(VectorName coeffs) : coeffs_(std::move(coeffs)), energy_(square(coeffs_.norm())) {}

  /// From coefficient data and an energy name (the caller's certificate).
  static FrameCoeffName from_parts(VectorName::CoeffOracle coeff, const RealName& energy) {
    return FrameCoeffName(VectorName::from_fourier(std::move(coeff), sqrt_name(energy)));
  }

  RealName coeff(std::size_t k) const { return coeffs_.coeff(k); }
  const RealName& energy() const { return energy_; }
  const VectorName& as_l2() const { return coeffs_; }

 private:
  VectorName coeffs_;
  RealName energy_;
};

/// T+ f = (<f, S^-1 f_k>)_k, computed as T* S^-1 f since S is self-adjoint.
inline FrameCoeffName pseudo_inverse(const CertifiedFrame& CF, const VectorName& f) {
  return FrameCoeffName(analysis(CF, inverse_frame_operator(CF, f)));
}

/// Converter H -> frame representation.
inline FrameCoeffName frame_name_of(const CertifiedFrame& CF, const VectorName& f) { return pseudo_inverse(CF, f); }

/// Converter frame representation -> H: sum_k c_k f_k.
inline VectorName reconstruct(const CertifiedFrame& CF, const FrameCoeffName& c) {
  return synthesis(CF.frame(), c.as_l2());
}

/// sum_k <f, f_k> S^-1 f_k, the other ordering of the frame decomposition.
inline VectorName reconstruct_dual_side(const CertifiedFrame& CF, const VectorName& f) {
  OperatorName dual_synthesis(CF.dual_elems(), loosen_up(sqrt_upper(CF.upper()) / CF.lower()), CF.frame().length(),
                              CF.frame().space_dim());
  return apply(dual_synthesis, analysis(CF, f));
}

/**
 * Frame recovered from its analysis operator: coefficient n of f_i is
 * coefficient i of T*(e_n), and norms(i) upgrades the coefficients of f_i to
 * a full name. Bounds (A, B) must accompany T*.
 */
inline CertifiedFrame frame_from_analysis(const OperatorName& Tstar, std::function<RealName(std::size_t)> norms,
                                          Rational lower, Rational upper) {
  VectorSequence elems(
      [Tstar, norms](std::size_t i) {
        WeakVectorName w([Tstar, i](std::size_t n) { return Tstar.col(n).coeff(i); }, norms(i).mag() + 1);
        return strengthen(w, norms(i));
      },
      Tstar.codomain_dim());
  return CertifiedFrame(Frame(std::move(elems), std::move(lower), std::move(upper), Tstar.domain_dim()), Tstar);
}

/**
 * sum_k <f_n, S^-1 f_k>^2 from the single entry p = <f_n, S^-1 f_n>:
 * (1 - p^2 - (1 - p)^2)/2 + p^2. Evaluated literally in name arithmetic.
 */
inline RealName complete_dual_gram_row(const std::function<RealName(std::size_t)>& row, std::size_t n) {
  RealName p = row(n);
  RealName one = RealName::integer(1);
  RealName q = one - p;
  RealName half = RealName::exact(Rational(1, 2));
  return half * (one - square(p) - square(q)) + square(p);
}

/// The row (<f_n, S^-1 f_k>)_k as a full l2 name, certified by the completion identity.
inline VectorName dual_gram_row_vector(const std::function<RealName(std::size_t)>& row, std::size_t n) {
  RealName norm = sqrt_name(complete_dual_gram_row(row, n));
  return strengthen(WeakVectorName(row, norm.mag()), norm);
}

/// Row oracle k -> <f_n, S^-1 f_k> of a certified frame.
inline std::function<RealName(std::size_t)> dual_gram_row(const CertifiedFrame& CF, std::size_t n) {
  return [CF, n](std::size_t k) { return inner(CF.elem(n), CF.dual_elem(k)); };
}

/// Orthogonal projection of l2 onto the range of T*: P delta_k = T* S^-1 f_k.
inline OperatorName range_projection(const CertifiedFrame& CF) {
  VectorSequence cols([CF](std::size_t k) { return analysis(CF, CF.dual_elem(k)); }, CF.frame().length());
  return OperatorName(std::move(cols), Rational(1), CF.frame().length(), CF.frame().length());
}

}  // namespace certframe
