// The ex3.7 shape with a_i = 2^-i, then with a Specker-style sequence where
// only the coefficients survive.
#include "certframe/certframe.hpp"

#include <iostream>

using namespace certframe;
using namespace certframe::gallery;

int main() {
  CertifiedFrame CF = ex37_certified(benign_sequence());
  VectorName a = analysis(CF, VectorName::basis(0));
  std::cout << "benign: |T* e_0| ~ " << a.norm().approx(30).to_double() << " (sqrt(4/3) ~ 1.1547)\n";
  VectorName f = VectorName::from_finite(FiniteVector::dense({Rational(1), Rational(-1, 2)}));
  std::cout << "benign: reconstruction residual <= "
            << norm_upper_bound(reconstruct(CF, frame_name_of(CF, f)) - f, 34).convert_to<double>() << "\n";

  SequenceGen g = specker_sequence(parse_enumerator("affine:2:1"));
  // ex37_certified(g) does not compile: a certificate needs a NormedSequence
  WeakVectorName w = analysis_coeffs(ex37_frame(g), VectorName::basis(0));
  std::cout << "specker: <e_0, f_i> for i < 6:";
  for (std::size_t i = 0; i < 6; ++i) std::cout << " " << w.coeff(i).approx(30).to_double();
  std::cout << "\nspecker: only |T* e_0| <= " << w.norm_upper().convert_to<double>() << " is known\n";

  Instance inst = make_instance("ex3.7", "specker:affine:2:1");
  std::cout << "instance certificate: " << (inst.certified ? "present" : "absent") << "\n  " << inst.note << "\n";
}
