#pragma once

#include "format.hpp"
#include "spec_file.hpp"
#include "suites.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace certframe::cli {

struct Options {
  std::string spec;
  Precision precision = 30;
  std::string vector;
  std::string bessel;
  std::string suite;
  std::size_t count = 0;  // 0: default per command
  std::string params = "benign";
};

namespace detail {

inline FiniteVector vector_option(const Options& o) {
  if (o.vector.empty()) throw CliError(kParseError, "--vector is required");
  try {
    return FiniteVector::parse(o.vector);
  } catch (const std::invalid_argument& e) {
    throw CliError(kParseError, std::string("--vector: ") + e.what());
  }
}

inline void print_vector(std::ostream& out, const std::string& label, const VectorName& v, std::size_t n, Precision p) {
  DyadicVector approx = v.approx(p + 1);  // every coordinate within 2^-(p+1)
  out << label << ":\n";
  for (std::size_t i = 0; i < n; ++i) out << "  [" << i << "] " << certified_from(approx.at(i), p) << "\n";
}

inline std::size_t shown(const std::optional<std::size_t>& n, std::size_t fallback) { return n ? *n : fallback; }

}  // namespace detail

inline int cmd_bounds(const Options& o, std::ostream& out) {
  LoadedSpec s = load_spec(o.spec);
  if (!s.frame) throw CliError(kMissingCertificate, "no computable frame for " + s.source + ": " + s.note);
  if (s.exact) {
    oracle::Solution sol = oracle::exact_frame_solve(*s.exact, static_cast<int>(o.precision) + 2);
    int D = decimal_digits(o.precision);
    auto show = [&](const oracle::Enclosure& e) {
      if (e.lo == e.hi) return decimal(e.lo, D) + " (exact)";
      return "[" + decimal((e.lo + e.hi) / 2, D) + " " + annotation(o.precision) + "]";
    };
    out << "A ∈ " << show(sol.bounds.A) << ", B ∈ " << show(sol.bounds.B) << "\n";
  }
  out << "certificate: " << s.declared << "\n";
  return kOk;
}

inline int cmd_reconstruct(const Options& o, std::ostream& out) {
  LoadedSpec s = load_spec(o.spec);
  const CertifiedFrame& CF = detail::require_certificate(s);
  FiniteVector fv = detail::vector_option(o);
  VectorName f = VectorName::from_finite(fv);
  FrameCoeffName c = pseudo_inverse(CF, f);
  VectorName rec = reconstruct(CF, c);
  detail::print_vector(out, "sum_k <f, S^-1 f_k> f_k", rec, fv.support_end() + 4, o.precision);
  out << "residual |f - reconstruction| <= "
      << decimal_up(norm_upper_bound(rec - f, o.precision + 2), decimal_digits(o.precision)) << "\n";
  return kOk;
}

inline int cmd_analyze(const Options& o, std::ostream& out) {
  LoadedSpec s = load_spec(o.spec);
  if (!s.frame) throw CliError(kMissingCertificate, "no computable frame for " + s.source + ": " + s.note);
  FiniteVector fv = detail::vector_option(o);
  VectorName f = VectorName::from_finite(fv);
  std::size_t n = o.count ? o.count : detail::shown(s.frame->length(), 8);
  if (!s.certified) {
    WeakVectorName w = analysis_coeffs(*s.frame, f);
    out << "analysis coefficients <f, f_i> (coefficientwise only):\n";
    for (std::size_t i = 0; i < n; ++i) out << "  [" << i << "] " << certified(w.coeff(i), o.precision) << "\n";
    out << "norm: unavailable (" << s.note << "); Bessel bound |T* f| <= "
        << decimal_up(w.norm_upper(), decimal_digits(o.precision)) << "\n";
    return kOk;
  }
  const CertifiedFrame& CF = *s.certified;
  VectorName a = analysis(CF, f);
  detail::print_vector(out, "analysis coefficients <f, f_i>", a, n, o.precision);
  out << "|T* f| = " << certified(a.norm(), o.precision) << "\n";
  FrameCoeffName c = pseudo_inverse(CF, f);
  detail::print_vector(out, "frame coefficients <f, S^-1 f_k>", c.as_l2(), n, o.precision);
  out << "energy sum_k <f, S^-1 f_k>^2 = " << certified(c.energy(), o.precision) << "\n";
  return kOk;
}

inline int cmd_dual(const Options& o, std::ostream& out) {
  LoadedSpec s = load_spec(o.spec);
  const CertifiedFrame& CF = detail::require_certificate(s);
  DualPair pair = canonical_pair(CF);
  if (!o.bessel.empty()) pair = dual_from_bessel(CF, parse_bessel(read_file(o.bessel), o.bessel));
  std::size_t k = o.count ? o.count : detail::shown(CF.frame().length(), 4);
  std::size_t d = detail::shown(CF.frame().space_dim(), 4);
  out << (o.bessel.empty() ? "canonical dual" : "dual from the Bessel family") << ", bounds "
      << to_string(pair.dual.lower()) << " <= ... <= " << to_string(pair.dual.upper()) << "\n";
  for (std::size_t i = 0; i < k; ++i) detail::print_vector(out, "g_" + std::to_string(i), pair.dual.elem(i), d, o.precision);
  if (o.bessel.empty()) return kOk;
  DualityReport rep = verify_duality(pair, builtin_test_vectors(CF.frame().space_dim()), suite_tolerance());
  out << "duality check on " << rep.cases.size() << " test vectors: " << (rep.passed ? "PASS" : "FAIL")
      << ", worst residual <= " << decimal_up(rep.worst, 12) << "\n";
  return rep.passed ? kOk : kSuiteFailure;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  LoadedSpec s = load_spec(o.spec);
  SuiteResult r = run_suite(o.suite, s, out);
  out << "worst residual <= " << decimal_up(r.worst, 12) << " (tolerance 2^-30)\n";
  for (const auto& f : r.failures) out << "counterexample: " << f << "\n";
  out << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kOk : kSuiteFailure;
}

inline int cmd_gallery(const Options& o, std::ostream& out) {
  gallery::Instance inst;
  try {
    inst = gallery::make_instance(o.spec, o.params);
  } catch (const std::invalid_argument& e) {
    throw CliError(kParseError, e.what());
  }
  out << inst.name << " (" << o.params << ")\n";
  out << "frame elements: " << (inst.frame ? "computable" : "not computable") << "\n";
  if (inst.frame) {
    out << "bounds: A = " << to_string(inst.frame->lower()) << ", B = " << to_string(inst.frame->upper()) << " (declared)\n";
  }
  out << "analysis operator: " << (inst.analysis_op ? "computable" : "not computable") << "\n";
  out << "certificate: " << (inst.certified ? "present" : "absent") << "\n";
  if (!inst.note.empty()) out << "note: " << inst.note << "\n";
  if (inst.frame) detail::print_vector(out, "f_0", inst.frame->elem(0), o.count ? o.count : 6, o.precision);
  return kOk;
}

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified frame computations on l2"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool spec) {
    if (spec) c->add_option("spec", o.spec, "frame spec file (JSON)")->required();
    c->add_option("-p,--precision", o.precision, "absolute precision in bits")->check(CLI::Range(0, 4096));
  };
  auto* bounds = app.add_subcommand("bounds", "frame-bound enclosure or declared certificates");
  common(bounds, true);
  auto* recon = app.add_subcommand("reconstruct", "sum_k <f, S^-1 f_k> f_k for a finite f");
  common(recon, true);
  recon->add_option("--vector", o.vector, "\"i:p/q,...\"")->required();
  auto* analyze = app.add_subcommand("analyze", "analysis and frame coefficients of a finite f");
  common(analyze, true);
  analyze->add_option("--vector", o.vector, "\"i:p/q,...\"")->required();
  analyze->add_option("--count", o.count, "coefficients to print");
  auto* dual = app.add_subcommand("dual", "canonical or Bessel-family dual elements");
  common(dual, true);
  dual->add_option("--bessel", o.bessel, "Bessel sequence file (JSON)");
  dual->add_option("--count", o.count, "dual elements to print");
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  common(verify, true);
  verify->add_option("--suite", o.suite, "duality | projection | gram | rate")
      ->required()
      ->check(CLI::IsMember({"duality", "projection", "gram", "rate"}));
  auto* gal = app.add_subcommand("gallery", "describe a gallery instance");
  common(gal, false);
  gal->add_option("name", o.spec, "ex3.7 | ex3.14 | ex3.20 | ex3.27")->required();
  gal->add_option("--params", o.params, "benign | specker:<enumerator>");
  gal->add_option("--count", o.count, "coordinates of f_0 to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(o, out);
    if (recon->parsed()) return cmd_reconstruct(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (dual->parsed()) return cmd_dual(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    return cmd_gallery(o, out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidFrame;
  }
}

}  // namespace certframe::cli
