// Three vectors in Q^2: bounds, canonical dual, reconstruction, and a
// second dual built from a Bessel sequence.
#include "certframe/certframe.hpp"

#include <iostream>

using namespace certframe;

static std::string show(const DyadicVector& v, std::size_t n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n; ++i) s += (i ? ", " : "") + std::to_string(v.at(i).to_double());
  return s + ")";
}

int main() {
  auto F = oracle::ExactFrame::of({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
  oracle::Solution exact = oracle::exact_frame_solve(F);
  std::cout << "A = " << to_string(exact.bounds.A.lo) << ", B = " << to_string(exact.bounds.B.hi) << "\n";

  CertifiedFrame CF = frame_from_vectors(F.vectors, Rational(1), Rational(3));
  for (std::size_t k = 0; k < 3; ++k) std::cout << "S^-1 f_" << k << " = " << show(CF.dual_elem(k).approx(40), 2) << "\n";

  VectorName f = VectorName::from_finite(FiniteVector::dense({Rational(1, 3), Rational(-2)}));
  FrameCoeffName c = frame_name_of(CF, f);
  std::cout << "coefficients " << show(c.as_l2().approx(40), 3) << ", energy " << c.energy().approx(40).to_double() << "\n";
  std::cout << "|f - sum c_k f_k| <= " << norm_upper_bound(reconstruct(CF, c) - f, 40).convert_to<double>() << "\n";

  // h_0 = (1/2, 0), all other h_k = 0
  BesselSequence h(VectorSequence::of({VectorName::from_finite(FiniteVector::dense({Rational(1, 2), Rational(0)}))}),
                   Rational(1, 4));
  DualPair alt = dual_from_bessel(CF, h);
  for (std::size_t k = 0; k < 3; ++k) std::cout << "g_" << k << " = " << show(alt.dual.elem(k).approx(40), 2) << "\n";
  DualityReport rep = verify_duality(alt, builtin_test_vectors(2), pow2(-30));
  std::cout << "duality " << (rep.passed ? "holds" : "FAILS") << " on " << rep.cases.size() << " test vectors\n";
  return rep.passed ? 0 : 1;
}
