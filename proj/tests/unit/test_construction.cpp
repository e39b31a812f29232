#include <gtest/gtest.h>

#include <cmath>

#include "bellforge/bell_model.hpp"
#include "bellforge/construction.hpp"
#include "bellforge/error.hpp"
#include "oracles.hpp"

using namespace bellforge;

TEST(Signs, DeterministicAndBalanced) {
  const SignTensor a = gen_signs(1, 0);
  EXPECT_TRUE(a(0, 0, 0) == 1.0 || a(0, 0, 0) == -1.0);
  EXPECT_EQ(gen_signs(1, 0)(0, 0, 0), a(0, 0, 0));
  const SignTensor b = gen_signs(8, 3);
  const SignTensor c = gen_signs(8, 3);
  EXPECT_TRUE(std::equal(b.values().begin(), b.values().end(), c.values().begin()));
  EXPECT_EQ(b.fingerprint(), c.fingerprint());
  EXPECT_NE(b.fingerprint(), gen_signs(8, 4).fingerprint());
  int close = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SignTensor s = gen_signs(8, seed);
    double mean = 0.0;
    for (double v : s.values()) {
      EXPECT_TRUE(v == 1.0 || v == -1.0);
      mean += v;
    }
    mean /= 512.0;
    if (std::abs(mean) <= 3.0 / std::sqrt(512.0)) ++close;
  }
  EXPECT_GE(close, 18);
}

TEST(Signs, GaussianVariant) {
  const SignTensor g = gen_signs(4, 1, SignDistribution::gaussian);
  double sq = 0.0;
  for (double v : g.values()) sq += v * v;
  EXPECT_GT(sq / 64.0, 0.4);
  EXPECT_LT(sq / 64.0, 2.0);
  EXPECT_EQ(parse_distribution("gaussian"), SignDistribution::gaussian);
  EXPECT_THROW(parse_distribution("cauchy"), InvalidArgument);
}

TEST(BuildBell, SmallestCaseAndBounds) {
  const BellFunctional m1 = build_bell(SignTensor(1, 0, SignDistribution::bernoulli, {1.0}));
  EXPECT_EQ(m1.scenario(), (Scenario{1, 2}));
  EXPECT_EQ(m1(0, 0, 0, 0), 1.0);
  EXPECT_EQ(m1(0, 0, 0, 1), 0.0);
  EXPECT_EQ(m1(0, 0, 1, 0), 0.0);
  EXPECT_EQ(m1(0, 0, 1, 1), 0.0);
  const SignTensor s = gen_signs(6, 2);
  const BellFunctional m = build_bell(s);
  for (double v : m.values()) EXPECT_LE(std::abs(v), 1.0 / 6 + 1e-15);
  EXPECT_EQ(m.provenance, s.fingerprint());
}

TEST(BuildBell, MatchesHandSummation) {
  // n = 2, eps[x][a][k].
  const std::vector<double> eps{1, -1, 1, 1, -1, -1, 1, -1};
  const SignTensor s(2, 0, SignDistribution::bernoulli, eps);
  const BellFunctional m = build_bell(s);
  auto e = [&](int x, int a, int k) { return eps[static_cast<std::size_t>((x * 2 + a) * 2 + k)]; };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double want = (a == 2 || b == 2) ? 0.0 : (e(x, a, 0) * e(y, b, 0) + e(x, a, 1) * e(y, b, 1)) / 4.0;
          EXPECT_DOUBLE_EQ(m(x, y, a, b), want);
        }
}

TEST(RowSpectral, ValuesAndInvariance) {
  EXPECT_DOUBLE_EQ(row_spectral_bound(gen_signs(1, 5)), 1.0);
  std::vector<double> med;
  for (std::uint64_t seed = 0; seed < 5; ++seed) med.push_back(row_spectral_bound(gen_signs(32, seed)));
  std::sort(med.begin(), med.end());
  EXPECT_GT(med[2], 1.6);
  EXPECT_LT(med[2], 2.4);
  // Transposing every (a,k) slice leaves K2 unchanged.
  const SignTensor s = gen_signs(5, 9);
  std::vector<double> t(s.values().size());
  for (int x = 0; x < 5; ++x)
    for (int a = 0; a < 5; ++a)
      for (int k = 0; k < 5; ++k) t[static_cast<std::size_t>((x * 5 + k) * 5 + a)] = s(x, a, k);
  EXPECT_NEAR(row_spectral_bound(SignTensor(5, 9, SignDistribution::bernoulli, t)), row_spectral_bound(s), 1e-12);
}

TEST(Povms, SmallestCaseByHand) {
  const PovmFamily e = build_povms(SignTensor(1, 0, SignDistribution::bernoulli, {1.0}), 2.0);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      EXPECT_NEAR(e.element(0, 0)(i, j), 0.5, 1e-15);
      EXPECT_NEAR(e.element(0, 1)(i, j), i == j ? 0.5 : -0.5, 1e-15);
    }
}

TEST(Povms, RankOneTraceAndCompleteness) {
  for (int n : {2, 5, 9}) {
    const SignTensor s = gen_signs(n, 21);
    const double k = 2.0 * std::pow(row_spectral_bound(s), 2);
    const PovmFamily e = build_povms(s, k);
    const PovmReport rep = validate_povm(e, 1e-9);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.worst_completeness, 1e-12);
    for (int x = 0; x < n; ++x)
      for (int a = 0; a < n; ++a) {
        const SymMatrix& m = e.element(x, a);
        EXPECT_NEAR(m.trace(), (n + 1.0) / (n * k), 1e-12);
        const Matrix sq = m.dense() * m.dense();
        EXPECT_LT((sq - (n + 1.0) / (n * k) * m.dense()).cwiseAbs().maxCoeff(), 1e-10);
      }
  }
}

TEST(Povms, SmallConstantIsRejectedWithWitness) {
  const SignTensor s = gen_signs(6, 1);
  try {
    build_povms(s, 0.2);
    FAIL() << "expected InvalidPovm";
  } catch (const InvalidPovm& e) {
    EXPECT_LT(e.witness(), -1e-10);
  }
}

TEST(Povms, ValidateReportsScaledElement) {
  PovmFamily p = PovmFamily::uniform(1, 2, 2);
  EXPECT_TRUE(validate_povm(PovmFamily(1, 1, 3, {SymMatrix::identity(3)}), 0.0).pass);
  const SymMatrix e0 = p.element(0, 0);
  p.element(0, 0) = e0 * 1.1;
  const PovmReport r = validate_povm(p, 1e-9);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.completeness_residuals[0], 0.1 * e0.dense().norm(), 1e-12);
}

TEST(State, Profiles) {
  const SchmidtState u = build_state(profile::MaximallyEntangled{4});
  for (double a : u.alphas()) EXPECT_DOUBLE_EQ(a, 0.5);
  const SchmidtState one = build_state(profile::TwoLevel{1.0, 5});
  EXPECT_EQ(one.dim(), 6);
  EXPECT_EQ(one[0], 1.0);
  EXPECT_EQ(one[5], 0.0);
  const SchmidtState flat = build_state(profile::TwoLevel{1.0 / std::sqrt(7.0), 6});
  for (double a : flat.alphas()) EXPECT_NEAR(a, 1.0 / std::sqrt(7.0), 1e-15);
  const SchmidtState e = build_state(profile::Explicit{{0.0, 3.0, 4.0}});
  EXPECT_DOUBLE_EQ(e[0], 0.8);
  EXPECT_DOUBLE_EQ(e[1], 0.6);
  EXPECT_THROW(build_state(profile::Explicit{{0.0, 0.0}}), InvalidArgument);
  EXPECT_THROW(SchmidtState({0.6, 0.8}), InvalidArgument);
}

namespace {

struct Built {
  SignTensor signs;
  BellFunctional m;
  PovmFamily e;
  double k;
};

Built build(int n, std::uint64_t seed) {
  SignTensor s = gen_signs(n, seed);
  const double k = 2.0 * std::pow(row_spectral_bound(s), 2);
  BellFunctional m = build_bell(s);
  PovmFamily e = build_povms(s, k);
  return {std::move(s), std::move(m), std::move(e), k};
}

}  // namespace

TEST(ClosedForm, SmallestCaseByHand) {
  const SignTensor s(1, 0, SignDistribution::bernoulli, {1.0});
  const SchmidtState st({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  const QuantumTerms t = explicit_quantum_value(s, build_bell(s), build_povms(s, 2.0), st);
  EXPECT_NEAR(t.total, 0.5, 1e-12);
  EXPECT_NEAR(t.term_ii_bound, 0.25, 1e-12);
}

TEST(ClosedForm, AgreesWithDirectContraction) {
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Built b = build(n, seed);
      for (double alpha : {0.3, 1 / std::sqrt(2.0), 0.95}) {
        const SchmidtState st = build_state(profile::TwoLevel{alpha, n});
        const QuantumTerms t = explicit_quantum_value(b.signs, b.m, b.e, st);
        const double direct = oracle::direct_value(b.m, b.e, b.e, st);
        EXPECT_NEAR(t.total, direct, 1e-9 * std::max(1.0, std::abs(direct)));
        EXPECT_NEAR(t.total, t.term_i + t.term_ii + t.term_iii, 1e-12);
        EXPECT_NEAR(t.total, pair(b.m, quantum_prob_pure(b.e, b.e, st)), 1e-9);
        EXPECT_GE(t.term_i, -1e-12);
        EXPECT_GE(t.term_iii, -1e-12);
        EXPECT_GE(t.term_ii, t.term_ii_bound - 1e-12);
      }
    }
}

TEST(ClosedForm, ProductStateKeepsOnlyFirstTerm) {
  const Built b = build(4, 3);
  std::vector<double> a(5, 0.0);
  a[0] = 1.0;
  const QuantumTerms t = explicit_quantum_value(b.signs, b.m, b.e, SchmidtState(a));
  EXPECT_EQ(t.term_ii, 0.0);
  EXPECT_EQ(t.term_iii, 0.0);
  EXPECT_GE(t.term_i, 0.0);
  EXPECT_NEAR(t.total, t.term_i, 1e-15);
}

TEST(ClosedForm, SignFlipOfOneSliceIsInvariant) {
  const SignTensor s = gen_signs(5, 8);
  std::vector<double> flipped(s.values().begin(), s.values().end());
  for (int x = 0; x < 5; ++x)
    for (int a = 0; a < 5; ++a) flipped[static_cast<std::size_t>((x * 5 + a) * 5 + 2)] *= -1.0;
  const SignTensor f(5, 8, SignDistribution::bernoulli, flipped);
  const BellFunctional ms = build_bell(s);
  const BellFunctional mf = build_bell(f);
  for (std::size_t i = 0; i < ms.values().size(); ++i) EXPECT_NEAR(ms.values()[i], mf.values()[i], 1e-15);
  const double k = 2.0 * std::pow(row_spectral_bound(s), 2);
  const SchmidtState st = build_state(profile::TwoLevel{0.6, 5});
  const QuantumTerms ts = explicit_quantum_value(s, ms, build_povms(s, k), st);
  const QuantumTerms tf = explicit_quantum_value(f, mf, build_povms(f, k), st);
  EXPECT_NEAR(ts.term_i, tf.term_i, 1e-12);
  EXPECT_NEAR(ts.term_ii, tf.term_ii, 1e-12);
  EXPECT_NEAR(ts.term_iii, tf.term_iii, 1e-12);
}

TEST(ClosedForm, RejectsForeignInputs) {
  const Built a = build(3, 1);
  const Built b = build(3, 2);
  const SchmidtState st = build_state(profile::TwoLevel{0.7, 3});
  EXPECT_THROW(explicit_quantum_value(a.signs, b.m, a.e, st), ProvenanceMismatch);
  EXPECT_THROW(explicit_quantum_value(a.signs, a.m, b.e, st), ProvenanceMismatch);
  EXPECT_THROW(explicit_quantum_value(a.signs, a.m, a.e, SchmidtState::maximally_entangled(3)), DimensionError);
}

TEST(Report, TrivialSizeAndStability) {
  const ConstructionReport r1 = construct_report(1, 0, kDefaultAlphaTop);
  EXPECT_LE(r1.ratio, 1.0);
  const ConstructionReport r5 = construct_report(5, 3, kDefaultAlphaTop);
  EXPECT_TRUE(r5.accepted);
  EXPECT_DOUBLE_EQ(r5.k_constant, 2.0 * r5.k2 * r5.k2);
  EXPECT_GE(r5.quantum_lb, r5.terms.term_ii_bound - 1e-12);
  EXPECT_NEAR(r5.quantum_lb, r5.terms.term_i + r5.terms.term_ii + r5.terms.term_iii, 1e-9);
  EXPECT_EQ(r5.classical_method, "exact");
  const ConstructionReport again = construct_report(5, 3, kDefaultAlphaTop);
  EXPECT_EQ(again.quantum_lb, r5.quantum_lb);
  EXPECT_EQ(again.classical.value, r5.classical.value);
}

TEST(Report, FallsBackToLocalSearchOverBudget) {
  ConstructOptions o;
  o.classical_budget = 1000.0;
  o.local_restarts = 4;
  const ConstructionReport r = construct_report(4, 1, kDefaultAlphaTop, o);
  EXPECT_EQ(r.classical_method, "local");
  EXPECT_FALSE(r.classical.exact);
}
