// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "certframe/certframe.hpp"
#include "suites.hpp"
#include "support/random_expr.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace certframe;

namespace {

// ---- pinned tolerances and sizes ----
const Rational kTol = pow2(-30);
constexpr Precision kFuzzMaxPrecision = 48;
constexpr int kFuzzExpressions = 10000;
constexpr double kFuzzSeconds = 60;
constexpr Precision kMercedesPrecision = 40;
constexpr int kEnclosureBits = 20;
constexpr double kMercedesSeconds = 5;
constexpr int kRandomFrames = 25;
constexpr int kVectorsPerFrame = 10;
constexpr Precision kDecompositionPrecision = 40;
constexpr double kDecompositionSeconds = 120;
constexpr int kBesselPerFixture = 5;
constexpr Precision kCheckPrecision = 34;

struct Outcome {
  bool passed = true;
  std::string detail;
  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

std::vector<std::string> fixtures() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(CERTFRAME_FIXTURE_DIR)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string base(const std::string& path) { return std::filesystem::path(path).filename().string(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// sqrt(|a - x|^2) + slack, with slack the approximation error of a.
Rational residual(const DyadicVector& a, const std::vector<Rational>& x, Precision slack) {
  Rational s = 0;
  std::size_t n = std::max(a.size(), x.size());
  for (std::size_t i = 0; i < n; ++i) {
    Rational d = a.at(i).to_rational() - (i < x.size() ? x[i] : Rational(0));
    s += d * d;
  }
  return sqrt_upper(s) + pow2(-slack);
}

std::vector<Rational> random_rationals(std::mt19937_64& rng, std::size_t d) {
  std::vector<Rational> v(d);
  for (auto& e : v) e = Rational(static_cast<long long>(rng() % 17) - 8, static_cast<long long>(rng() % 6) + 1);
  return v;
}

bool within_sqrt(const Rational& q, const Rational& s, const Rational& tol) {
  Rational lo = q - tol, hi = q + tol;
  return hi >= 0 && s <= hi * hi && (lo <= 0 || lo * lo <= s);
}

// ---- 1: name contract ----
Outcome name_fuzzing() {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  certframe::testing::ExprGen gen(20240601);
  for (int e = 0; e < kFuzzExpressions && o.passed; ++e) {
    auto x = gen.make(4);
    std::vector<Rational> a;
    for (Precision n = 0; n <= kFuzzMaxPrecision; ++n) a.push_back(x.name.approx(n).to_rational());
    for (Precision n = 0; n <= kFuzzMaxPrecision; ++n) {
      if (abs(a[n] - x.exact) > pow2(-n)) o.fail("expression " + std::to_string(e) + " misses its value at n = " + std::to_string(n));
      for (Precision m = n + 1; m <= kFuzzMaxPrecision; ++m) {
        if (abs(a[n] - a[m]) > pow2(-n) + pow2(-m)) {
          o.fail("expression " + std::to_string(e) + " inconsistent at n = " + std::to_string(n) + ", m = " + std::to_string(m));
        }
      }
    }
  }
  double s = seconds_since(t0);
  if (s > kFuzzSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.passed) o.detail = std::to_string(kFuzzExpressions) + " expressions, n < m <= 48";
  return o;
}

// ---- 2: Mercedes ----
Outcome mercedes() {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  cli::LoadedSpec s = cli::load_spec(std::string(CERTFRAME_FIXTURE_DIR) + "/mercedes.json");
  const CertifiedFrame& CF = *s.certified;
  const std::vector<std::vector<Rational>> duals{{Rational(2, 3), Rational(-1, 3)}, {Rational(-1, 3), Rational(2, 3)},
                                                 {Rational(1, 3), Rational(1, 3)}};
  for (std::size_t k = 0; k < 3; ++k) {
    if (residual(CF.dual_elem(k).approx(kMercedesPrecision + 1), duals[k], kMercedesPrecision + 1) > pow2(-kMercedesPrecision)) {
      o.fail("dual element " + std::to_string(k));
    }
  }
  VectorName x = inverse_frame_operator(CF, VectorName::basis(0));
  if (residual(x.approx(kMercedesPrecision + 1), duals[0], kMercedesPrecision + 1) > pow2(-kMercedesPrecision)) o.fail("S^-1 (1, 0)");
  oracle::Solution sol = oracle::exact_frame_solve(*s.exact, kEnclosureBits);
  auto [A, B] = sol.bounds;
  if (!(A.lo <= 1 && 1 <= A.hi && B.lo <= 3 && 3 <= B.hi)) o.fail("enclosure misses {1, 3}");
  if (A.hi - A.lo > pow2(-kEnclosureBits) || B.hi - B.lo > pow2(-kEnclosureBits)) o.fail("enclosure too wide");
  double t = seconds_since(t0);
  if (t > kMercedesSeconds) o.fail("took " + std::to_string(t) + " s");
  if (o.passed) o.detail = "duals and S^-1 (1,0) within 2^-40, A in [" + to_string(A.lo) + ", " + to_string(A.hi) + "], B in [" + to_string(B.lo) + ", " + to_string(B.hi) + "]";
  return o;
}

// ---- 3: frame decomposition, both orderings ----
Outcome decomposition() {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::mt19937_64 rng(31337);
  Rational worst = 0;
  for (int t = 0; t < kRandomFrames; ++t) {
    std::size_t d = 1 + rng() % 6;
    std::optional<oracle::ExactFrame> F;
    while (!F) {
      std::size_t n = d + rng() % (11 - d);
      std::vector<oracle::Vec> vs;
      for (std::size_t i = 0; i < n; ++i) vs.push_back(random_rationals(rng, d));
      auto cand = oracle::ExactFrame::of(vs);
      if (oracle::rank(oracle::frame_operator(cand)) == d) F = cand;
    }
    CertifiedFrame CF = oracle::embed(*F);
    for (int v = 0; v < kVectorsPerFrame; ++v) {
      auto x = random_rationals(rng, d);
      VectorName f = VectorName::from_finite(FiniteVector::dense(x));
      Rational r1 = residual(reconstruct(CF, frame_name_of(CF, f)).approx(kDecompositionPrecision), x, kDecompositionPrecision);
      Rational r2 = residual(reconstruct_dual_side(CF, f).approx(kDecompositionPrecision), x, kDecompositionPrecision);
      worst = std::max({worst, r1, r2});
      if (r1 > kTol || r2 > kTol) o.fail("frame " + std::to_string(t) + ", vector " + std::to_string(v));
    }
  }
  double s = seconds_since(t0);
  if (s > kDecompositionSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.passed) o.detail = "25 frames x 10 vectors, worst residual " + cli::decimal_up(worst, 14);
  return o;
}

// ---- 4, 5, 6: the CLI suites run in-process on every fixture ----
Outcome suite_on_fixtures(const std::string& name) {
  Outcome o;
  Rational worst = 0;
  for (const auto& path : fixtures()) {
    cli::LoadedSpec s = cli::load_spec(path);
    std::ostringstream log;
    cli::SuiteResult r = cli::run_suite(name, s, log);
    worst = std::max(worst, r.worst);
    if (!r.passed) o.fail(base(path) + ": " + (r.failures.empty() ? std::string("failed") : r.failures.front()));
  }
  if (o.passed) o.detail = std::to_string(fixtures().size()) + " fixtures, worst residual " + cli::decimal_up(worst, 14);
  return o;
}

// ---- 7: duals from Bessel sequences and their recovery ----
Outcome bessel_family() {
  Outcome o;
  std::mt19937_64 rng(4242);
  Rational worst = 0;
  for (const auto& path : fixtures()) {
    cli::LoadedSpec s = cli::load_spec(path);
    const CertifiedFrame& CF = *s.certified;
    std::size_t dim = CF.frame().space_dim().value_or(4);
    std::size_t K = std::min<std::size_t>(CF.frame().length().value_or(3), 3);
    auto tests = builtin_test_vectors(CF.frame().space_dim());
    if (tests.size() > 3) tests.resize(3);
    for (int b = 0; b < kBesselPerFixture; ++b) {
      std::vector<VectorName> hs;
      Rational D = 0;
      for (std::size_t k = 0; k < K; ++k) {
        FiniteVector h = FiniteVector::dense(random_rationals(rng, dim));
        D += h.norm_squared();
        hs.push_back(VectorName::from_finite(h));
      }
      auto list = std::make_shared<std::vector<VectorName>>(hs);
      BesselSequence h(VectorSequence([list](std::size_t k) { return k < list->size() ? (*list)[k] : VectorName::zero(); }), D);
      DualPair pair = dual_from_bessel(CF, h);
      DualityReport rep = verify_duality(pair, tests, kTol);
      worst = std::max(worst, rep.worst);
      if (!rep.passed) o.fail(base(path) + ": Bessel dual " + std::to_string(b) + " fails duality");

      // h'_k = g_k - S^-1 f_k has Bessel bound D; feeding it back must return g
      Frame g = pair.dual;
      BesselSequence hp(VectorSequence([g, CF](std::size_t k) { return g.elem(k) - CF.dual_elem(k); }, CF.frame().length()), D);
      DualPair again = dual_from_bessel(CF, hp);
      for (std::size_t k = 0; k < K + 1; ++k) {
        Rational diff = norm_upper_bound(again.dual.elem(k) - g.elem(k), kCheckPrecision);
        worst = std::max(worst, diff);
        if (diff > kTol) o.fail(base(path) + ": recovery of g_" + std::to_string(k));
      }
    }
  }
  if (o.passed) o.detail = "5 Bessel sequences per fixture, worst residual " + cli::decimal_up(worst, 14);
  return o;
}

// ---- 8: gallery boundary ----
template <class G>
concept Ex37Certifiable = requires(const G& g) { gallery::ex37_certified(g); };
template <class G>
concept Ex320Certifiable = requires(const G& g) { gallery::ex320_frame(g); };
static_assert(Ex37Certifiable<gallery::NormedSequence> && !Ex37Certifiable<gallery::SequenceGen>);
static_assert(Ex320Certifiable<gallery::NormedSequence> && !Ex320Certifiable<gallery::SequenceGen>);

Outcome gallery_boundary() {
  Outcome o;
  CertifiedFrame CF = gallery::ex37_certified(gallery::benign_sequence());
  VectorName c = analysis(CF, VectorName::basis(0));
  if (!within_sqrt(c.norm().approx(kCheckPrecision).to_rational(), Rational(4, 3), kTol)) o.fail("ex3.7 analysis norm");
  std::vector<Rational> x{Rational(1), Rational(-1, 2), Rational(0), Rational(3, 4)};
  VectorName f = VectorName::from_finite(FiniteVector::dense(x));
  if (norm_upper_bound(reconstruct(CF, frame_name_of(CF, f)) - f, kCheckPrecision) > kTol) o.fail("ex3.7 reconstruction");

  for (const char* name : {"ex3.7", "ex3.20"}) {
    gallery::Instance inst = gallery::make_instance(name, "specker:affine:2:1");
    if (inst.certified) o.fail(std::string(name) + " specker instance carries a certificate");
  }
  gallery::SequenceGen g = gallery::specker_sequence(gallery::parse_enumerator("affine:2:1"));
  WeakVectorName w = analysis_coeffs(gallery::ex37_frame(g), VectorName::basis(0));
  OperatorName U = gallery::example_lower_column(g).ex320_operator;
  for (std::size_t i = 0; i < 32; ++i) {
    if (!within_sqrt(w.coeff(i).approx(40).to_rational(), g.a_squared(i), pow2(-40))) o.fail("ex3.7 coefficient " + std::to_string(i));
    // row 1 of U is (0, 1, a_1, a_2, ...)
    RealName ai = apply(U, VectorName::basis(i + 1)).coeff(1);
    if (!within_sqrt(ai.approx(40).to_rational(), g.a_squared(i), pow2(-40))) o.fail("ex3.20 coefficient " + std::to_string(i));
  }
  if (o.passed) o.detail = "benign ex3.7 end to end; specker ex3.7/ex3.20 uncertified, a_i for i < 32 recovered";
  return o;
}

// ---- 9: representation converters ----
Outcome converters() {
  Outcome o;
  Rational worst = 0;
  for (const auto& path : fixtures()) {
    cli::LoadedSpec s = cli::load_spec(path);
    const CertifiedFrame& CF = *s.certified;
    auto tests = builtin_test_vectors(CF.frame().space_dim());
    if (tests.size() > 3) tests.resize(3);
    for (const auto& t : tests) {
      VectorName f = VectorName::from_finite(t);
      FrameCoeffName c = frame_name_of(CF, f);
      VectorName back = reconstruct(CF, c);
      FrameCoeffName again = frame_name_of(CF, back);
      std::vector<Rational> checks{norm_upper_bound(back - f, kCheckPrecision),
                                   norm_upper_bound(again.as_l2() - c.as_l2(), kCheckPrecision),
                                   abs(again.energy().approx(kCheckPrecision).to_rational() - c.energy().approx(kCheckPrecision).to_rational()) + pow2(1 - kCheckPrecision)};
      for (std::size_t i = 0; i < t.support_end() + 3; ++i) {
        checks.push_back(abs(back.coeff(i).approx(kCheckPrecision).to_rational() - t.at(i)) + pow2(-kCheckPrecision));
      }
      for (std::size_t k = 0; k < 6; ++k) {
        checks.push_back(abs(again.coeff(k).approx(kCheckPrecision).to_rational() - c.coeff(k).approx(kCheckPrecision).to_rational()) + pow2(1 - kCheckPrecision));
      }
      for (const auto& v : checks) {
        worst = std::max(worst, v);
        if (v > kTol) o.fail(base(path) + ": f = [" + t.str() + "]");
      }
    }
  }
  if (o.passed) o.detail = "round trips on every fixture, worst " + cli::decimal_up(worst, 14);
  return o;
}

// ---- 10: the CLI binary, twice ----
std::pair<int, std::string> shell(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, out};
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome cli_determinism() {
  Outcome o;
  int runs = 0;
  for (const auto& path : fixtures()) {
    for (const char* suite : {"duality", "projection", "gram", "rate"}) {
      std::string cmd = std::string("'") + CERTFRAME_CLI + "' verify '" + path + "' --suite " + suite + " 2>&1";
      auto [c1, o1] = shell(cmd);
      auto [c2, o2] = shell(cmd);
      runs += 2;
      if (c1 != 0 || c2 != 0) o.fail(base(path) + " " + suite + ": exit " + std::to_string(c1) + "/" + std::to_string(c2));
      if (o1 != o2) o.fail(base(path) + " " + suite + ": outputs differ");
    }
  }
  if (o.passed) o.detail = std::to_string(runs) + " runs, all exit 0, pairs byte-identical";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"name contract fuzzing", name_fuzzing},
      {"Mercedes fixture", mercedes},
      {"frame decomposition, both orderings", decomposition},
      {"frame algorithm rate", [] { return suite_on_fixtures("rate"); }},
      {"projection suite", [] { return suite_on_fixtures("projection"); }},
      {"gram completion", [] { return suite_on_fixtures("gram"); }},
      {"duals from Bessel sequences", bessel_family},
      {"gallery boundary", gallery_boundary},
      {"representation converters", converters},
      {"CLI determinism", cli_determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.passed;
    std::printf("criterion %zu %s: %s (%s) [%.1f s]\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
