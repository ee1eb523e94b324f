#pragma once

#include "certframe/frames/representation.hpp"

#include <stdexcept>
#include <utility>

namespace certframe {

/**
 * Riesz basis x_n = T e_n for a bounded isomorphism T of l2. Both directions
 * are carried, together with both adjoints: T* certifies the analysis
 * operator, (T^-1)* gives the biorthogonal system.
 */
class RieszBasisName {
 public:
  RieszBasisName(OperatorName T, OperatorName T_inv, OperatorName T_adjoint, OperatorName T_inv_adjoint)
      : T_(std::move(T)), T_inv_(std::move(T_inv)), T_adj_(std::move(T_adjoint)), T_inv_adj_(std::move(T_inv_adjoint)) {
    if (T_inv_.norm_bound() <= 0) throw std::invalid_argument("inverse of a Riesz operator cannot be zero");
  }

  VectorName elem(std::size_t n) const { return T_.col(n); }
  const OperatorName& T() const { return T_; }
  const OperatorName& T_inv() const { return T_inv_; }
  /// col(n) = T*(e_n) = (<e_n, x_k>)_k
  const OperatorName& T_adjoint() const { return T_adj_; }
  const OperatorName& T_inv_adjoint() const { return T_inv_adj_; }

 private:
  OperatorName T_, T_inv_, T_adj_, T_inv_adj_;
};

inline RationalMatrix matrix_product(const RationalMatrix& X, const RationalMatrix& Y) {
  check_matrix(X);
  check_matrix(Y);
  if (X.front().size() != Y.size()) throw std::invalid_argument("matrix shapes do not chain");
  RationalMatrix P(X.size(), std::vector<Rational>(Y.front().size()));
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t k = 0; k < Y.size(); ++k) {
      if (X[i][k] == 0) continue;
      for (std::size_t j = 0; j < Y.front().size(); ++j) P[i][j] += X[i][k] * Y[k][j];
    }
  }
  return P;
}

/// T = M (+) I and T^-1 = M_inv (+) I; M M_inv = I is checked exactly.
inline RieszBasisName riesz_from_block(const RationalMatrix& M, const RationalMatrix& M_inv) {
  check_matrix(M);
  check_matrix(M_inv);
  if (M.size() != M.front().size() || M_inv.size() != M.size() || M_inv.front().size() != M.size()) {
    throw std::invalid_argument("Riesz blocks must be square of equal size");
  }
  RationalMatrix prod = matrix_product(M, M_inv);
  for (std::size_t i = 0; i < prod.size(); ++i) {
    for (std::size_t j = 0; j < prod.size(); ++j) {
      if (prod[i][j] != (i == j ? 1 : 0)) throw std::invalid_argument("T_inv is not the inverse of T");
    }
  }
  return RieszBasisName(block_plus_identity(M), block_plus_identity(M_inv), block_plus_identity(transpose(M)),
                        block_plus_identity(transpose(M_inv)));
}

/// (x_n) as a frame: A = 1/|T^-1|^2, B = |T|^2, T* as certificate.
inline CertifiedFrame riesz_as_frame(const RieszBasisName& R) {
  Rational inv = R.T_inv().norm_bound();
  Frame F(R.T().columns(), Rational(1) / (inv * inv), R.T().norm_bound() * R.T().norm_bound());
  return CertifiedFrame(std::move(F), R.T_adjoint());
}

/// Biorthogonal system g_k = (T^-1)* e_k: <x_n, g_m> = delta_nm.
inline VectorSequence biorthogonal_dual_riesz(const RieszBasisName& R) {
  OperatorName Tia = R.T_inv_adjoint();
  return VectorSequence([Tia](std::size_t k) { return Tia.col(k); });
}

/**
 * A point of l2 carried in the renormed space |||x||| = |T x|. The name
 * keeps the standard coordinates of x and the image T x, whose norm is the
 * new norm and whose coefficients are the coordinates of x against the
 * orthonormal basis (T^-1 e_n) of the renormed space.
 */
class RenormedVector {
 public:
  explicit RenormedVector(VectorName image, VectorName::CoeffOracle coords)
      : image_(std::move(image)), coords_(std::move(coords)) {}

  RealName coeff(std::size_t i) const { return coords_(i); }
  const RealName& triple_norm() const { return image_.norm(); }
  const VectorName& image() const { return image_; }

 private:
  VectorName image_;
  VectorName::CoeffOracle coords_;
};

inline RenormedVector renorm_to(const RieszBasisName& R, const VectorName& x) {
  return RenormedVector(apply(R.T(), x), [x](std::size_t i) { return x.coeff(i); });
}

/// Back to the standard name: x = T^-1 (T x).
inline VectorName renorm_from(const RieszBasisName& R, const RenormedVector& y) { return apply(R.T_inv(), y.image()); }

}  // namespace certframe
