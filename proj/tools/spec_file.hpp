#pragma once

#include "certframe/certframe.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace certframe::cli {

enum ExitCode : int { kOk = 0, kSuiteFailure = 1, kParseError = 2, kInvalidFrame = 3, kMissingCertificate = 4 };

class CliError : public std::runtime_error {
 public:
  CliError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// M_nk = <f_n, S^-1 f_k> known exactly.
using ExactGram = std::function<Rational(std::size_t, std::size_t)>;

struct LoadedSpec {
  std::string source;
  std::string kind;
  std::optional<Frame> frame;
  std::optional<CertifiedFrame> certified;
  std::optional<oracle::ExactFrame> exact;  // finite-dimensional ground truth
  ExactGram gram;                           // empty when no oracle is available
  std::optional<Frame> dual;                // replaces the canonical dual when the file lists one
  std::string note;                         // why there is no certificate
  std::string declared;                     // human-readable certificate summary
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& field, const std::string& msg) {
  throw CliError(kParseError, "field '" + field + "': " + msg);
}

inline Rational rational_at(const json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
  fail(field, "expected a rational as \"p/q\" or an integer");
}

inline std::size_t count_at(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) fail(field, "expected a positive integer");
  return j.get<std::size_t>();
}

inline RationalMatrix matrix_at(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  RationalMatrix m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].empty()) fail(row_field, "expected a non-empty array");
    if (i > 0 && j[i].size() != j[0].size()) fail(row_field, "row length differs from row 0");
    std::vector<Rational> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(rational_at(j[i][k], row_field + "[" + std::to_string(k) + "]"));
    m.push_back(std::move(row));
  }
  return m;
}

inline const json& required(const json& j, const char* key) {
  if (!j.contains(key)) fail(key, "missing");
  return j.at(key);
}

inline std::pair<Rational, Rational> bounds_at(const json& j) {
  if (!j.is_array() || j.size() != 2) fail("bounds", "expected [A, B]");
  Rational A = rational_at(j[0], "bounds[0]"), B = rational_at(j[1], "bounds[1]");
  if (A <= 0 || B < A) throw CliError(kInvalidFrame, "bounds must satisfy 0 < A <= B");
  return {A, B};
}

inline ExactGram gram_of(const oracle::Solution& sol) {
  return [M = sol.M](std::size_t n, std::size_t k) {
    return n < M.size() && k < M.size() ? M[n][k] : Rational(0);
  };
}

inline ExactGram identity_gram() {
  return [](std::size_t n, std::size_t k) { return Rational(n == k ? 1 : 0); };
}

inline std::string fmt_bounds(const Rational& A, const Rational& B) {
  if (A == B) return "A = B = " + to_string(A) + " (declared)";
  return "A = " + to_string(A) + ", B = " + to_string(B) + " (declared)";
}

inline oracle::Solution solve_or_reject(const oracle::ExactFrame& F) {
  try {
    return oracle::exact_frame_solve(F);
  } catch (const oracle::NonSpanningError& e) {
    throw CliError(kInvalidFrame, e.what());
  }
}

inline void load_onb(const json& j, LoadedSpec& out) {
  std::optional<std::size_t> dim;
  if (j.contains("dim")) dim = count_at(j["dim"], "dim");
  std::size_t m = j.contains("multiplicity") ? count_at(j["multiplicity"], "multiplicity") : 1;
  out.certified = m == 1 ? frame_from_onb(dim) : frame_from_repeated_onb(m, dim);
  out.frame = out.certified->frame();
  out.declared = fmt_bounds(out.certified->lower(), out.certified->upper());
  out.gram = [m](std::size_t n, std::size_t k) { return n / m == k / m ? Rational(1, static_cast<long long>(m)) : Rational(0); };
  if (dim) {
    std::vector<oracle::Vec> vs;
    for (std::size_t i = 0; i < *dim * m; ++i) {
      oracle::Vec v(*dim);
      v[i / m] = 1;
      vs.push_back(std::move(v));
    }
    out.exact = oracle::ExactFrame::of(std::move(vs));
  }
}

inline void load_finite(const json& j, LoadedSpec& out) {
  RationalMatrix vs = matrix_at(required(j, "vectors"), "vectors");
  auto F = oracle::ExactFrame::of(vs);
  auto sol = solve_or_reject(F);
  Rational A = sol.bounds.A.lo, B = sol.bounds.B.hi;
  if (j.contains("bounds")) {
    std::tie(A, B) = bounds_at(j["bounds"]);
    if (!oracle::bounds_hold(sol.S, A, B)) throw CliError(kInvalidFrame, "declared bounds do not enclose the spectrum of S");
    out.declared = fmt_bounds(A, B);
  } else {
    out.declared = "A = " + to_string(A) + ", B = " + to_string(B) + " (outer ends of the exact enclosure)";
  }
  out.certified = frame_from_vectors(vs, A, B);
  out.frame = out.certified->frame();
  out.exact = F;
  out.gram = gram_of(sol);
  if (j.contains("dual")) {
    RationalMatrix gs = matrix_at(j["dual"], "dual");
    if (gs.size() != vs.size() || gs.front().size() != vs.front().size()) fail("dual", "shape must match 'vectors'");
    // lambda_max of the dual's frame operator is at most its trace
    Rational gB = 0;
    for (const auto& g : gs) gB += FiniteVector::dense(g).norm_squared();
    Rational gA = Rational(1) / B;  // only the upper bound of a claimed dual enters the checks
    std::vector<VectorName> elems;
    for (const auto& g : gs) elems.push_back(VectorName::from_finite(FiniteVector::dense(g)));
    out.dual = Frame(VectorSequence::of(std::move(elems)), gA, gB < gA ? gA : gB, vs.front().size());
  }
}

inline void load_operator(const json& j, LoadedSpec& out) {
  RationalMatrix U = matrix_at(required(j, "matrix"), "matrix");
  Rational C = rational_at(required(j, "C"), "C");
  if (C <= 0) throw CliError(kInvalidFrame, "C must be positive");
  RationalMatrix Ut = transpose(U);
  if (j.contains("adjoint_rows")) {
    RationalMatrix rows = matrix_at(j["adjoint_rows"], "adjoint_rows");
    if (rows != Ut) throw CliError(kInvalidFrame, "adjoint_rows is not the transpose of 'matrix'");
  }
  // frame elements are the columns of U
  auto F = oracle::ExactFrame::of(Ut);
  auto sol = solve_or_reject(F);
  if (!oracle::bounds_hold(sol.S, C * C, sol.bounds.B.hi)) {
    throw CliError(kInvalidFrame, "|U* f| >= C |f| fails for the given C");
  }
  OperatorName Uname = from_finite_matrix(U);
  try {
    out.certified = frame_from_operator(Uname, C, from_finite_matrix(Ut));
  } catch (const std::invalid_argument& e) {
    throw CliError(kInvalidFrame, e.what());
  }
  out.frame = out.certified->frame();
  out.exact = F;
  out.gram = gram_of(sol);
  out.declared = fmt_bounds(out.certified->lower(), out.certified->upper()) + " from C and |U|";
}

inline void load_riesz(const json& j, LoadedSpec& out) {
  RationalMatrix T = matrix_at(required(j, "T"), "T");
  RationalMatrix Ti = matrix_at(required(j, "T_inv"), "T_inv");
  try {
    RieszBasisName R = riesz_from_block(T, Ti);
    out.certified = riesz_as_frame(R);
  } catch (const std::invalid_argument& e) {
    throw CliError(kInvalidFrame, e.what());
  }
  out.frame = out.certified->frame();
  out.declared = fmt_bounds(out.certified->lower(), out.certified->upper());
  // a Riesz basis is biorthogonal to its canonical dual
  out.gram = identity_gram();
}

inline void load_gallery(const json& j, LoadedSpec& out) {
  const json& g = required(j, "gallery");
  if (!g.is_object()) fail("gallery", "expected an object with 'name' and 'params'");
  const json& name = required(g, "name");
  if (!name.is_string()) fail("gallery.name", "expected a string");
  std::string params = "benign";
  if (g.contains("params")) {
    if (!g["params"].is_string()) fail("gallery.params", "expected a string");
    params = g["params"].get<std::string>();
  }
  gallery::Instance inst;
  try {
    inst = gallery::make_instance(name.get<std::string>(), params);
  } catch (const std::invalid_argument& e) {
    fail("gallery", e.what());
  }
  out.frame = inst.frame;
  out.certified = inst.certified;
  out.note = inst.note;
  if (out.frame) out.declared = fmt_bounds(out.frame->lower(), out.frame->upper());
  // every gallery operator is invertible on l2, so the frames are Riesz bases
  if (inst.benign) out.gram = identity_gram();
}

}  // namespace detail

/// Parses a frame spec document; `source` names it in error messages.
inline LoadedSpec parse_spec(const std::string& text, const std::string& source) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw CliError(kParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  if (!j.is_object()) throw CliError(kParseError, source + ": top level must be an object");
  LoadedSpec out;
  out.source = source;
  try {
    const json& kind = detail::required(j, "kind");
    if (!kind.is_string()) detail::fail("kind", "expected a string");
    out.kind = kind.get<std::string>();
    if (out.kind == "onb") {
      detail::load_onb(j, out);
    } else if (out.kind == "finite") {
      detail::load_finite(j, out);
    } else if (out.kind == "operator") {
      detail::load_operator(j, out);
    } else if (out.kind == "riesz") {
      detail::load_riesz(j, out);
    } else if (out.kind == "gallery") {
      detail::load_gallery(j, out);
    } else {
      detail::fail("kind", "unknown kind '" + out.kind + "'");
    }
  } catch (const CliError& e) {
    throw CliError(e.code(), source + ": " + e.what());
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LoadedSpec load_spec(const std::string& path) { return parse_spec(read_file(path), path); }

/// Bessel file: {"vectors": [[...], ...], "bound": "D"}; h_k = 0 past the list.
inline BesselSequence parse_bessel(const std::string& text, const std::string& source) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw CliError(kParseError, source + ": malformed JSON");
  }
  try {
    RationalMatrix hs = detail::matrix_at(detail::required(j, "vectors"), "vectors");
    Rational D = 0;
    std::vector<VectorName> elems;
    for (const auto& h : hs) {
      D += FiniteVector::dense(h).norm_squared();
      elems.push_back(VectorName::from_finite(FiniteVector::dense(h)));
    }
    // sum_k <f, h_k>^2 <= sum_k |h_k|^2 |f|^2 always holds; a declared bound may be sharper
    if (j.contains("bound")) {
      D = detail::rational_at(j["bound"], "bound");
      if (!hs.empty() && !oracle::bounds_hold(oracle::frame_operator(oracle::ExactFrame::of(hs)), Rational(0), D)) {
        throw CliError(kInvalidFrame, "declared Bessel bound " + to_string(D) + " is below the largest eigenvalue");
      }
    }
    std::size_t n = elems.size();
    auto list = std::make_shared<std::vector<VectorName>>(std::move(elems));
    return BesselSequence(VectorSequence([list, n](std::size_t k) { return k < n ? (*list)[k] : VectorName::zero(); }), D);
  } catch (const CliError& e) {
    throw CliError(e.code(), source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(kParseError, source + ": " + e.what());
  }
}

}  // namespace certframe::cli
