#pragma once

#include "format.hpp"
#include "spec_file.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace certframe::cli {

/// Tolerance of every suite check, and the precision residual norms are read at.
inline const Rational& suite_tolerance() {
  static const Rational tol = pow2(-30);
  return tol;
}
constexpr Precision kResidualPrecision = 34;

struct SuiteResult {
  bool passed = true;
  Rational worst = 0;
  std::vector<std::string> failures;  // counterexamples
};

namespace detail {

inline void record(SuiteResult& r, const Rational& residual, const std::string& what) {
  if (residual > r.worst) r.worst = residual;
  if (residual > suite_tolerance()) {
    r.passed = false;
    r.failures.push_back(what + ": residual <= " + decimal_up(residual, 12));
  }
}

inline std::size_t test_dim(const LoadedSpec& s) {
  if (s.frame && s.frame->space_dim()) return *s.frame->space_dim();
  return 6;
}

inline std::size_t coeff_dim(const LoadedSpec& s) {
  if (s.frame && s.frame->length()) return std::min<std::size_t>(*s.frame->length(), 6);
  return 6;
}

/// Seeded small rational vectors with support below d.
inline std::vector<FiniteVector> seeded_vectors(std::uint64_t seed, std::size_t d, int count) {
  std::mt19937_64 rng(seed);
  std::vector<FiniteVector> out;
  for (int i = 0; i < count; ++i) {
    std::vector<Rational> v(d);
    for (auto& e : v) {
      auto p = static_cast<long long>(rng() % 19) - 9;
      auto q = static_cast<long long>(rng() % 8) + 1;
      e = Rational(p, q);
    }
    out.push_back(FiniteVector::dense(v));
  }
  return out;
}

inline const CertifiedFrame& require_certificate(const LoadedSpec& s) {
  if (!s.certified) {
    throw CliError(kMissingCertificate, "no analysis certificate for " + s.source + ": " +
                                            (s.note.empty() ? std::string("none supplied") : s.note));
  }
  return *s.certified;
}

/// Number of gram entries in row n that can be non-zero.
inline std::size_t gram_extent(const LoadedSpec& s, std::size_t n) {
  if (s.frame && s.frame->length()) return *s.frame->length();
  return n + 64;
}

}  // namespace detail

/// f = sum <f, g_k> f_k and its symmetric form on the built-in and seeded test vectors.
inline SuiteResult suite_duality(const LoadedSpec& s, std::ostream& out) {
  const CertifiedFrame& CF = detail::require_certificate(s);
  DualPair pair = s.dual ? DualPair{CF, *s.dual, std::nullopt} : canonical_pair(CF);
  auto tests = builtin_test_vectors(CF.frame().space_dim());
  for (auto& v : detail::seeded_vectors(101, std::min<std::size_t>(detail::test_dim(s), 6), 4)) tests.push_back(v);
  DualityReport report = verify_duality(pair, tests, suite_tolerance());
  SuiteResult r;
  for (const auto& c : report.cases) {
    if (c.residual) detail::record(r, *c.residual, "f = [" + c.f.str() + "] f - sum <f, g_k> f_k");
    detail::record(r, c.symmetric_residual, "f = [" + c.f.str() + "] f - sum <f, f_k> g_k");
  }
  out << "duality: " << report.cases.size() << " test vectors"
      << (s.dual ? " (dual listed in the spec file)" : " (canonical dual)") << "\n";
  return r;
}

/// P^2 = P, P = P* (via the exact gram) and P T* f = T* f.
inline SuiteResult suite_projection(const LoadedSpec& s, std::ostream& out) {
  const CertifiedFrame& CF = detail::require_certificate(s);
  OperatorName P = range_projection(CF);
  SuiteResult r;
  std::size_t L = detail::coeff_dim(s);
  auto cs = detail::seeded_vectors(202, L, 20);
  for (const auto& c : cs) {
    VectorName cn = VectorName::from_finite(c);
    VectorName Pc = apply(P, cn);
    detail::record(r, norm_upper_bound(apply(P, Pc) - Pc, kResidualPrecision), "c = [" + c.str() + "] P^2 c - P c");
    if (s.gram) {
      std::size_t N = s.frame && s.frame->length() ? *s.frame->length() : c.support_end() + 64;
      std::vector<FiniteVector::Entry> adj;
      for (std::size_t l = 0; l < N; ++l) {
        Rational v = 0;
        for (const auto& [k, ck] : c.entries()) v += s.gram(k, l) * ck;
        if (v != 0) adj.emplace_back(l, v);
      }
      VectorName Pstar = VectorName::from_finite(FiniteVector(std::move(adj)));
      detail::record(r, norm_upper_bound(Pc - Pstar, kResidualPrecision), "c = [" + c.str() + "] P c - P* c");
    }
  }
  for (const auto& f : builtin_test_vectors(CF.frame().space_dim())) {
    VectorName a = analysis(CF, VectorName::from_finite(f));
    detail::record(r, norm_upper_bound(apply(P, a) - a, kResidualPrecision), "f = [" + f.str() + "] P T* f - T* f");
  }
  out << "projection: " << cs.size() << " coefficient vectors"
      << (s.gram ? ", adjoint from the exact gram" : ", no exact gram: P* check skipped") << "\n";
  return r;
}

/// complete_dual_gram_row(n) against sum_k M_nk^2 and M_nn from the exact gram.
inline SuiteResult suite_gram(const LoadedSpec& s, std::ostream& out) {
  const CertifiedFrame& CF = detail::require_certificate(s);
  SuiteResult r;
  std::size_t rows = s.frame && s.frame->length() ? std::min<std::size_t>(*s.frame->length(), 10) : 10;
  for (std::size_t n = 0; n < rows; ++n) {
    RealName value = complete_dual_gram_row(dual_gram_row(CF, n), n);
    Rational v = value.approx(kResidualPrecision).to_rational();
    Rational slack = pow2(-kResidualPrecision);
    if (!s.gram) {
      // without an oracle only the identity sum_k M_nk^2 = M_nn is checked
      Rational diag = inner(CF.elem(n), CF.dual_elem(n)).approx(kResidualPrecision).to_rational();
      detail::record(r, abs(v - diag) + 2 * slack, "row " + std::to_string(n) + " completion - M_nn");
      continue;
    }
    Rational sq = 0;
    for (std::size_t k = 0; k < detail::gram_extent(s, n); ++k) sq += s.gram(n, k) * s.gram(n, k);
    detail::record(r, abs(v - sq) + slack, "row " + std::to_string(n) + " completion - sum_k M_nk^2");
    detail::record(r, abs(v - s.gram(n, n)) + slack, "row " + std::to_string(n) + " completion - M_nn");
  }
  out << "gram: " << rows << " rows" << (s.gram ? " against the exact gram" : ", no exact gram") << "\n";
  return r;
}

/// Iteration count of the frame algorithm against its rate bound, and its accuracy.
inline SuiteResult suite_rate(const LoadedSpec& s, std::ostream& out) {
  const CertifiedFrame& CF = detail::require_certificate(s);
  SuiteResult r;
  const Rational &A = CF.lower(), &B = CF.upper();
  auto tests = builtin_test_vectors(CF.frame().space_dim());
  std::optional<oracle::Solution> sol;
  if (s.exact) sol = oracle::exact_frame_solve(*s.exact);
  int checked = 0;
  for (Precision p : {20, 40, 60}) {
    for (const auto& f : tests) {
      auto res = run_frame_algorithm(CF, VectorName::from_finite(f), p);
      long bound = 1;
      if (A != B) {
        double nf = std::sqrt(f.norm_squared().convert_to<double>());
        double a = A.convert_to<double>(), b = B.convert_to<double>();
        bound = static_cast<long>(std::ceil((p + std::log2(nf / a) + 4) / std::log2((b + a) / (b - a))));
      }
      ++checked;
      bool ok = A == B ? res.iterations == 1 : res.iterations <= bound;
      if (!ok) {
        r.passed = false;
        r.failures.push_back("p = " + std::to_string(p) + ", f = [" + f.str() + "]: " + std::to_string(res.iterations) +
                             " iterations, bound " + std::to_string(bound));
      }
      if (sol) {
        std::vector<Rational> fv = f.to_dense(s.exact->d);
        Rational err2 = 0;
        auto x = oracle::mat_vec(sol->S_inv, fv);
        for (std::size_t i = 0; i < std::max(x.size(), res.value.size()); ++i) {
          Rational d = res.value.at(i).to_rational() - (i < x.size() ? x[i] : Rational(0));
          err2 += d * d;
        }
        if (err2 > pow2(-2 * p)) {
          r.passed = false;
          r.failures.push_back("p = " + std::to_string(p) + ", f = [" + f.str() + "]: result misses S^-1 f");
        }
      }
    }
  }
  out << "rate: " << checked << " runs at p in {20, 40, 60}" << (sol ? ", results checked against S^-1" : "") << "\n";
  return r;
}

inline SuiteResult run_suite(const std::string& name, const LoadedSpec& s, std::ostream& out) {
  if (name == "duality") return suite_duality(s, out);
  if (name == "projection") return suite_projection(s, out);
  if (name == "gram") return suite_gram(s, out);
  if (name == "rate") return suite_rate(s, out);
  throw CliError(kParseError, "unknown suite '" + name + "' (duality, projection, gram, rate)");
}

}  // namespace certframe::cli
