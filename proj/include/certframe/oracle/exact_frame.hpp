#pragma once

#include "certframe/frames/frame.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace certframe::oracle {

using Matrix = RationalMatrix;
using Vec = std::vector<Rational>;
/// Coefficients, lowest degree first.
using Poly = std::vector<Rational>;

class NonSpanningError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finitely many vectors in Q^d.
struct ExactFrame {
  std::vector<Vec> vectors;
  std::size_t d = 0;

  static ExactFrame of(std::vector<Vec> vectors) {
    if (vectors.empty() || vectors.front().empty()) throw std::invalid_argument("empty frame");
    std::size_t d = vectors.front().size();
    for (const auto& v : vectors) {
      if (v.size() != d) throw std::invalid_argument("frame vectors must share one dimension");
    }
    return ExactFrame{std::move(vectors), d};
  }
};

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec mat_vec(const Matrix& M, const Vec& v) {
  Vec r(M.size());
  for (std::size_t i = 0; i < M.size(); ++i) r[i] = dot(M[i], v);
  return r;
}

inline Matrix identity(std::size_t n) {
  Matrix I(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline Matrix mat_mul(const Matrix& X, const Matrix& Y) {
  Matrix P(X.size(), Vec(Y.empty() ? 0 : Y.front().size()));
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t k = 0; k < Y.size(); ++k) {
      if (X[i][k] == 0) continue;
      for (std::size_t j = 0; j < P[i].size(); ++j) P[i][j] += X[i][k] * Y[k][j];
    }
  }
  return P;
}

inline std::size_t rank(Matrix M) {
  std::size_t r = 0, rows = M.size(), cols = rows ? M.front().size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (M[i][c] == 0) continue;
      Rational f = M[i][c] / M[r][c];
      for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
    }
    ++r;
  }
  return r;
}

/// Gauss-Jordan inverse; throws NonSpanningError when singular.
inline Matrix inverse(Matrix M) {
  std::size_t n = M.size();
  Matrix I = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) throw NonSpanningError("singular frame operator: the vectors do not span");
    std::swap(M[p], M[c]);
    std::swap(I[p], I[c]);
    Rational inv = 1 / M[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      M[c][j] *= inv;
      I[c][j] *= inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || M[i][c] == 0) continue;
      Rational f = M[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        M[i][j] -= f * M[c][j];
        I[i][j] -= f * I[c][j];
      }
    }
  }
  return I;
}

// ---- polynomials ----------------------------------------------------------

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational eval(const Poly& p, const Rational& x) {
  Rational v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long long>(i));
  trim(d);
  return d;
}

/// Remainder of a / b (b non-zero).
inline Poly poly_rem(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

inline Poly poly_div(Poly a, const Poly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  Poly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  trim(q);
  return q;
}

inline Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

/// det(x I - A) by Faddeev-LeVerrier (exact over Q).
inline Poly char_poly(const Matrix& A) {
  std::size_t n = A.size();
  Poly c(n + 1);
  c[n] = 1;
  Matrix Mk(n, Vec(n));
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = mat_mul(A, Mk);
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    Mk = std::move(next);
    Matrix AM = mat_mul(A, Mk);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AM[i][i];
    c[n - k] = -tr / static_cast<long long>(k);
  }
  return c;
}

inline Poly squarefree(const Poly& p) {
  Poly g = poly_gcd(p, derivative(p));
  return g.size() <= 1 ? p : poly_div(p, g);
}

/// Sturm chain of a squarefree polynomial.
inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, derivative(p)};
  while (chain.back().size() > 1) {
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

inline int sign_changes(const std::vector<Poly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    Rational v = eval(q, x);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Number of distinct roots in (a, b].
inline int roots_in(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
  return sign_changes(chain, a) - sign_changes(chain, b);
}

struct Enclosure {
  Rational lo, hi;  // lo <= lambda <= hi
};

struct BoundsEnclosure {
  Enclosure A, B;  // smallest and largest eigenvalue of S
};

/**
 * Smallest and largest eigenvalues of a symmetric positive definite S by
 * bisection on Sturm counts, to width <= 2^-bits. A midpoint that is an exact
 * root with nothing beyond it collapses the enclosure.
 */
inline BoundsEnclosure eigen_enclosure(const Matrix& S, int bits = 20) {
  Poly p = squarefree(char_poly(S));
  auto chain = sturm_chain(p);
  Rational trace = 0;
  for (std::size_t i = 0; i < S.size(); ++i) trace += S[i][i];
  const Rational width = pow2(-bits);
  if (eval(p, Rational(0)) == 0) throw NonSpanningError("S is singular: the vectors do not span");

  // a power of two keeps every midpoint on a dyadic grid, so small exact roots get hit
  const Rational top = pow2(ceil_log2(trace + 1));

  // smallest root in (lo, hi]
  Rational lo = 0, hi = top;
  while (hi - lo > width || lo <= 0) {
    Rational mid = (lo + hi) / 2;
    if (roots_in(chain, lo, mid) > 0) {
      if (eval(p, mid) == 0 && roots_in(chain, lo, mid) == 1) {
        // mid itself is the only root in (lo, mid]
        lo = hi = mid;
        break;
      }
      hi = mid;
    } else {
      lo = mid;
    }
  }
  Enclosure A{lo, hi};

  // largest root in (lo, hi]
  lo = 0;
  hi = top;
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    if (roots_in(chain, mid, hi) > 0) {
      lo = mid;
    } else if (eval(p, mid) == 0) {
      lo = hi = mid;
      break;
    } else {
      hi = mid;
    }
  }
  return {A, Enclosure{lo, hi}};
}

/// A <= lambda_min(S) and lambda_max(S) <= B, decided exactly (S symmetric positive semidefinite).
inline bool bounds_hold(const Matrix& S, const Rational& A, const Rational& B) {
  Poly p = squarefree(char_poly(S));
  auto chain = sturm_chain(p);
  Rational trace = 0;
  for (std::size_t i = 0; i < S.size(); ++i) trace += S[i][i];
  int below = roots_in(chain, Rational(-1), A) - (eval(p, A) == 0 ? 1 : 0);
  int above = roots_in(chain, B, trace + 1);
  return below == 0 && above == 0;
}

struct Solution {
  Matrix S, S_inv;
  std::vector<Vec> dual;  // S^-1 f_i
  Matrix M;               // M_nk = <f_n, S^-1 f_k>, the projection onto the range of T*
  BoundsEnclosure bounds;
};

inline Matrix frame_operator(const ExactFrame& F) {
  Matrix S(F.d, Vec(F.d));
  for (const auto& f : F.vectors) {
    for (std::size_t i = 0; i < F.d; ++i) {
      if (f[i] == 0) continue;
      for (std::size_t j = 0; j < F.d; ++j) S[i][j] += f[i] * f[j];
    }
  }
  return S;
}

inline Solution exact_frame_solve(const ExactFrame& F, int bits = 20) {
  Solution sol;
  sol.S = frame_operator(F);
  sol.S_inv = inverse(sol.S);
  for (const auto& f : F.vectors) sol.dual.push_back(mat_vec(sol.S_inv, f));
  std::size_t n = F.vectors.size();
  sol.M.assign(n, Vec(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) sol.M[a][b] = dot(F.vectors[a], sol.dual[b]);
  }
  sol.bounds = eigen_enclosure(sol.S, bits);
  return sol;
}

/// U_lk = <phi_l, S_F^-1 f_k>.
inline Matrix cross_gram(const ExactFrame& F, const ExactFrame& Phi) {
  Solution s = exact_frame_solve(F);
  Matrix U(Phi.vectors.size(), Vec(F.vectors.size()));
  for (std::size_t l = 0; l < Phi.vectors.size(); ++l) {
    for (std::size_t k = 0; k < F.vectors.size(); ++k) U[l][k] = dot(Phi.vectors[l], s.dual[k]);
  }
  return U;
}

/// The frame on the first d coordinates of l2, bounds from the outer enclosure ends.
inline CertifiedFrame embed(const ExactFrame& F) {
  Solution s = exact_frame_solve(F);
  return frame_from_vectors(F.vectors, s.bounds.A.lo, s.bounds.B.hi);
}

}  // namespace certframe::oracle
