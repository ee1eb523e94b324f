#pragma once

#include "certframe/operators/operator_name.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace certframe {

/**
 * Frame (f_i) for H with rational bounds 0 < A <= B. The bounds are
 * certificates supplied by the caller. `length()` is the number of elements
 * when finite (the rest are zero); `space_dim()` restricts H to the span of
 * the first d coordinates, which is how finite frames are embedded in l2.
 */
class Frame {
 public:
  Frame(VectorSequence elems, Rational lower, Rational upper, std::optional<std::size_t> space_dim = std::nullopt)
      : elems_(std::move(elems)), lower_(std::move(lower)), upper_(std::move(upper)), space_dim_(space_dim) {
    if (lower_ <= 0) throw std::invalid_argument("lower frame bound must be positive");
    if (upper_ < lower_) throw std::invalid_argument("upper frame bound below lower bound");
  }

  VectorName elem(std::size_t i) const { return elems_(i); }
  const VectorSequence& elems() const { return elems_; }
  const Rational& lower() const { return lower_; }
  const Rational& upper() const { return upper_; }
  const std::optional<std::size_t>& length() const { return elems_.length(); }
  const std::optional<std::size_t>& space_dim() const { return space_dim_; }

 private:
  VectorSequence elems_;
  Rational lower_, upper_;
  std::optional<std::size_t> space_dim_;
};

/// Synthesis operator T: l2 -> H, T delta_k = f_k, |T| <= sqrt(B).
inline OperatorName synthesis_operator(const Frame& F) {
  return OperatorName(F.elems(), sqrt_upper(F.upper()), F.length(), F.space_dim());
}

struct FrameAlgorithmResult {
  DyadicVector value;  // within 2^-target of S^-1 f
  int iterations = 0;
};

/**
 * Richardson iteration for S^-1 with relaxation 2/(A+B).
 *
 * Error policy for target t, r = (B-A)/(B+A):
 *  - f is replaced by an approximant within A 2^-(t+2), moving S^-1 f by at most 2^-(t+2);
 *  - J is the least count with r^J |f|/A <= 2^-(t+2) (J = 1 when A = B);
 *  - each step errs by at most (1-r) 2^-(t+2): half from applying S (times the
 *    relaxation), half from rounding, so the accumulated error is <= 2^-(t+2).
 * Total < 2^-t.
 */
class FrameSolver {
 public:
  FrameSolver(OperatorName S, Rational lower, Rational upper, std::optional<std::size_t> space_dim)
      : S_(std::move(S)), A_(std::move(lower)), B_(std::move(upper)), space_dim_(space_dim) {}

  FrameAlgorithmResult run(const VectorName& f, Precision target) const {
    if (target < 0) throw std::invalid_argument("frame algorithm target must be non-negative");
    const Rational lambda = Rational(2) / (A_ + B_);
    const Rational r = (B_ - A_) / (B_ + A_);
    const Rational goal = pow2(-(static_cast<std::int64_t>(target) + 2));

    auto kf = static_cast<Precision>(target + 2 + ceil_log2(Rational(1) / A_));
    DyadicVector fh = restrict(f.approx(kf));
    Rational fub = sqrt_upper(fh.norm_squared().to_rational());

    int J = 0;
    if (A_ == B_) {
      J = 1;
    } else if (fub > 0) {
      // e_J = r^J |f| / A, kept as an unreduced fraction en / ed
      Rational e0 = r * fub / A_;
      BigInt en = numerator_of(e0) * denominator_of(goal), ed = denominator_of(e0) * numerator_of(goal);
      const BigInt rn = numerator_of(r), rd = denominator_of(r);
      J = 1;
      while (en > ed) {
        en *= rn;
        ed *= rd;
        ++J;
      }
    }

    const Rational delta = (1 - r) * goal;
    const auto q = static_cast<Precision>(ceil_log2(2 * lambda / delta));
    const std::int64_t grid_base = ceil_log2(Rational(2) / delta);

    DyadicVector g;
    for (int j = 0; j < J; ++j) {
      DyadicVector res = fh;
      if (!g.empty()) res.axpy(Dyadic(-1), restrict(apply_finite(S_, g, q)));
      std::size_t len = std::max(g.size(), res.size());
      std::int64_t grid = grid_base + (msb_of(BigInt(len + 1)) + 2) / 2;
      std::vector<Dyadic> next(len);
      for (std::size_t i = 0; i < len; ++i) {
        next[i] = Dyadic::round_rational(g.at(i).to_rational() + lambda * res.at(i).to_rational(), grid);
      }
      g = DyadicVector(std::move(next));
    }
    return {std::move(g), J};
  }

  const OperatorName& S() const { return S_; }
  const Rational& lower() const { return A_; }
  const Rational& upper() const { return B_; }

 private:
  DyadicVector restrict(DyadicVector v) const { return space_dim_ ? v.truncated(*space_dim_) : v; }

  OperatorName S_;
  Rational A_, B_;
  std::optional<std::size_t> space_dim_;
};

/**
 * Frame together with a name of its analysis operator T*: H -> l2, whose
 * columns T*(e_n) = (<e_n, f_i>)_i are full l2 names. The certificate is what
 * makes analysis, S and S^-1 computable.
 */
class CertifiedFrame {
 public:
  CertifiedFrame(Frame frame, OperatorName analysis_op) : frame_(std::move(frame)), analysis_(std::move(analysis_op)) {
    OperatorName T = synthesis_operator(frame_);
    VectorSequence s_cols([T, Tstar = analysis_](std::size_t k) { return apply(T, Tstar.col(k)); }, frame_.space_dim());
    OperatorName S(std::move(s_cols), frame_.upper(), frame_.space_dim(), frame_.space_dim());
    solver_ = std::make_shared<const FrameSolver>(S, frame_.lower(), frame_.upper(), frame_.space_dim());
    auto solver = solver_;
    auto elems = frame_.elems();
    dual_ = VectorSequence(
        [solver, elems](std::size_t k) { return solve_name(*solver, elems(k)); }, frame_.length());
  }

  const Frame& frame() const { return frame_; }
  const OperatorName& analysis_op() const { return analysis_; }
  VectorName elem(std::size_t i) const { return frame_.elem(i); }
  const Rational& lower() const { return frame_.lower(); }
  const Rational& upper() const { return frame_.upper(); }

  /// S = T T*, norm bound B.
  const OperatorName& frame_operator() const { return solver_->S(); }
  const FrameSolver& solver() const { return *solver_; }

  /// Canonical dual element S^-1 f_k (cached, shared by copies of this frame).
  VectorName dual_elem(std::size_t k) const { return dual_(k); }
  const VectorSequence& dual_elems() const { return dual_; }

  /// Full name of S^-1 f: approx(n) runs the frame algorithm at target n.
  static VectorName solve_name(const FrameSolver& solver, const VectorName& f) {
    auto s = std::make_shared<const FrameSolver>(solver);
    return VectorName::from_cauchy([s, f](Precision n) { return s->run(f, n).value; },
                                   loosen_up(f.bound() / solver.lower()));
  }

 private:
  Frame frame_;
  OperatorName analysis_;
  std::shared_ptr<const FrameSolver> solver_;
  VectorSequence dual_;
};

// ---- constructors -------------------------------------------------------

/// Orthonormal basis (e_i) of H (H = span of the first dim coordinates when given).
inline CertifiedFrame frame_from_onb(std::optional<std::size_t> dim = std::nullopt) {
  VectorSequence elems([](std::size_t k) { return VectorName::basis(k); }, dim);
  return CertifiedFrame(Frame(std::move(elems), Rational(1), Rational(1), dim), identity_operator(dim));
}

/// Every basis vector listed m times in a row: f_i = e_{i / m}; S = m I.
inline CertifiedFrame frame_from_repeated_onb(std::size_t m, std::optional<std::size_t> dim = std::nullopt) {
  if (m == 0) throw std::invalid_argument("multiplicity must be positive");
  std::optional<std::size_t> length;
  if (dim) length = *dim * m;
  VectorSequence elems([m](std::size_t i) { return VectorName::basis(i / m); }, length);
  VectorSequence cols(
      [m](std::size_t n) {
        std::vector<FiniteVector::Entry> e;
        for (std::size_t j = 0; j < m; ++j) e.emplace_back(n * m + j, Rational(1));
        return VectorName::from_finite(FiniteVector(std::move(e)));
      },
      dim);
  Rational M(static_cast<long long>(m));
  return CertifiedFrame(Frame(std::move(elems), M, M, dim), OperatorName(std::move(cols), sqrt_upper(M), dim, length));
}

/// Finitely many vectors in Q^d with caller-certified bounds; T* from the exact rows.
inline CertifiedFrame frame_from_vectors(const std::vector<std::vector<Rational>>& vectors, Rational lower, Rational upper) {
  if (vectors.empty()) throw std::invalid_argument("a frame needs at least one vector");
  std::size_t d = vectors.front().size();
  if (d == 0) throw std::invalid_argument("frame vectors must be non-empty");
  std::vector<VectorName> elems;
  for (const auto& v : vectors) {
    if (v.size() != d) throw std::invalid_argument("frame vectors must share one dimension");
    elems.push_back(VectorName::from_finite(FiniteVector::dense(v)));
  }
  RationalMatrix rows(vectors.size(), std::vector<Rational>(d));
  for (std::size_t i = 0; i < vectors.size(); ++i) rows[i] = vectors[i];
  // T* has matrix rows f_i^T: column n is (f_i[n])_i
  OperatorName Tstar = from_finite_matrix(rows);
  OperatorName analysis(Tstar.columns(), sqrt_upper(upper), d, vectors.size());
  return CertifiedFrame(Frame(VectorSequence::of(std::move(elems)), std::move(lower), std::move(upper), d), analysis);
}

/**
 * Frame (U delta_k) for a bounded surjective U with |U* f| >= C |f|.
 * Surjectivity is not decidable; C is the caller's certificate.
 */
inline Frame frame_from_operator(const OperatorName& U, const Rational& C) {
  if (C <= 0) throw std::invalid_argument("frame_from_operator needs C > 0");
  Rational B = U.norm_bound() * U.norm_bound();
  if (B < C * C) throw std::invalid_argument("norm bound of U is below C");
  return Frame(U.columns(), C * C, B, U.codomain_dim());
}

/// As above, certified by a name of U*, which is then the analysis operator.
inline CertifiedFrame frame_from_operator(const OperatorName& U, const Rational& C, const OperatorName& adjoint) {
  Frame F = frame_from_operator(U, C);
  OperatorName Tstar(adjoint.columns(), adjoint.norm_bound(), U.codomain_dim(), U.domain_dim());
  return CertifiedFrame(std::move(F), std::move(Tstar));
}

// ---- operators of a frame -----------------------------------------------

/// sum_k c_k f_k; the tail beyond an approximant of c is controlled by sqrt(B).
inline VectorName synthesis(const Frame& F, const VectorName& c) { return apply(synthesis_operator(F), c); }

/**
 * Coefficients (<f, f_i>)_i without a certificate: computable entry by entry,
 * with only the Bessel upper bound sqrt(B)|f| on the norm.
 */
inline WeakVectorName analysis_coeffs(const Frame& F, const VectorName& f) {
  auto elems = F.elems();
  return WeakVectorName([elems, f](std::size_t i) { return inner(f, elems(i)); },
                        sqrt_upper(F.upper()) * f.bound());
}

/// T* f as a full l2 name.
inline VectorName analysis(const CertifiedFrame& CF, const VectorName& f) { return apply(CF.analysis_op(), f); }

inline const OperatorName& frame_operator(const CertifiedFrame& CF) { return CF.frame_operator(); }

/// S^-1 f within 2^-target, with the number of iterations used.
inline FrameAlgorithmResult run_frame_algorithm(const CertifiedFrame& CF, const VectorName& f, Precision target) {
  return CF.solver().run(f, target);
}

/// S^-1 f as a full name.
inline VectorName inverse_frame_operator(const CertifiedFrame& CF, const VectorName& f) {
  return CertifiedFrame::solve_name(CF.solver(), f);
}

}  // namespace certframe
