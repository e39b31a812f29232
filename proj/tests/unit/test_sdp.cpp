#include <gtest/gtest.h>

#include <cmath>

#include "bellforge/bell_model.hpp"
#include "bellforge/classical.hpp"
#include "bellforge/construction.hpp"
#include "bellforge/error.hpp"
#include "bellforge/quantum.hpp"
#include "bellforge/sdp.hpp"
#include "oracles.hpp"

using namespace bellforge;

namespace {

constexpr double kTsirelson = 0.85355339059327373;

}  // namespace

TEST(SparseSym, DotAndDenseAgree) {
  SparseSym a;
  a.add(0, 0, 2.0);
  a.add(2, 1, 1.5);  // stored as (1,2)
  a.add(1, 2, 0.5);  // merged
  ASSERT_EQ(a.entries().size(), 2u);
  const Matrix d = a.dense(3);
  EXPECT_EQ(d(1, 2), 2.0);
  EXPECT_EQ(d(2, 1), 2.0);
  Matrix g(3, 3);
  g << 1, 2, 3, 2, 5, 7, 3, 7, 11;
  EXPECT_DOUBLE_EQ(a.dot(g), (d * g).trace());
  Matrix acc = Matrix::Zero(3, 3);
  a.axpy(0.5, acc);
  EXPECT_TRUE(acc.isApprox(0.5 * d));
  EXPECT_DOUBLE_EQ(a.frobenius_norm(), d.norm());
}

TEST(SolveSdp, FixedEntry) {
  GramProblem p;
  p.m = 1;
  p.objective.add(0, 0, 1.0);
  EqConstraint c;
  c.a.add(0, 0, 1.0);
  c.b = 1.0;
  p.constraints.push_back(c);
  const SdpSolution s = solve_sdp(p);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.value, 1.0, 1e-6);
}

TEST(SolveSdp, ExtremeRay) {
  GramProblem p;
  p.m = 2;
  p.objective.add(0, 0, 1.0);
  EqConstraint c;
  c.a.add(0, 0, 1.0);
  c.a.add(1, 1, 1.0);
  c.b = 1.0;
  p.constraints.push_back(c);
  const SdpSolution s = solve_sdp(p);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.value, 1.0, 1e-5);
  EXPECT_GE(min_eigenvalue(s.gram), -1e-8);
  p.sense = Sense::minimize;
  EXPECT_NEAR(solve_sdp(p).value, 0.0, 1e-5);
}

TEST(SolveSdp, IterationCapFlagsNonConvergence) {
  SdpSettings st;
  st.max_iter = 2;
  const SdpSolution s = solve_sdp(build_op_gram(chsh_game()), st);
  EXPECT_FALSE(s.converged);
  EXPECT_EQ(s.iterations, 2);
}

TEST(OpGram, LayoutAndFeasibleDeterministicPoint) {
  const GramProblem p = build_op_gram(chsh_game());
  const GramLayout l{2, 2};
  EXPECT_EQ(p.m, l.size());
  EXPECT_EQ(p.m, 9);
  // Deterministic strategy: u_x^{a(x)} = v_y^{b(y)} = z, all others 0.
  Vector w = Vector::Zero(p.m);
  Matrix vecs = Matrix::Zero(p.m, 1);
  vecs(l.z(), 0) = 1.0;
  vecs(l.u(0, 0), 0) = vecs(l.u(1, 0), 0) = 1.0;
  vecs(l.v(0, 0), 0) = vecs(l.v(1, 0), 0) = 1.0;
  const Matrix g = vecs * vecs.transpose();
  for (const auto& c : p.constraints) EXPECT_NEAR(c.a.dot(g), c.b, 1e-15);
  EXPECT_NEAR(p.objective.dot(g), 0.75, 1e-15);
  // The face contains the feasible point.
  ASSERT_GT(p.face.cols(), 0);
  const Matrix proj = p.face * p.face.transpose();
  EXPECT_LT((proj * g * proj - g).norm(), 1e-10);
}

TEST(Omega, TrivialScenarios) {
  BellFunctional m(Scenario{1, 1});
  m.at(0, 0, 0, 0) = 0.7;
  EXPECT_NEAR(omega_op(m).value, 0.7, 1e-5);
  EXPECT_NEAR(omega_op(BellFunctional(Scenario{2, 2})).value, 0.0, 1e-6);
}

TEST(Omega, Chsh) {
  const OmegaResult r = omega_op(chsh_game());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, kTsirelson, 1e-3);
  EXPECT_NEAR(r.max_value, kTsirelson, 1e-3);
  EXPECT_NEAR(r.min_value, 1.0 - kTsirelson, 1e-3);
  EXPECT_GE(min_eigenvalue(r.max_solution.gram), -1e-8);
}

TEST(Omega, Scaling) {
  const BellFunctional m = oracle::random_functional(2, 3, 4);
  const double v = omega_op(m).value;
  EXPECT_NEAR(omega_op(m.scaled(-3.0)).value, 3.0 * v, 1e-4 * 3.0 * std::max(1.0, v));
}

TEST(Omega, SandwichOnRandomFunctionals) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const BellFunctional m = oracle::random_functional(2, 2 + seed % 2, 60 + seed);
    const OmegaResult w = omega_op(m);
    ASSERT_TRUE(w.converged);
    const ClassicalResult c = classical_value_exact(m);
    EXPECT_GE(w.max_value, c.max_value - 1e-5);
    EXPECT_LE(w.min_value, c.min_value + 1e-5);
    SeesawConfig cfg;
    cfg.dim = 2;
    cfg.restarts = 3;
    EXPECT_LE(seesaw(m, cfg).value, w.max_value + 1e-5);
  }
}

TEST(Omega, ConstructionSmall) {
  const BellFunctional m = build_bell(gen_signs(3, 0));
  const OmegaResult w = omega_op(m);
  EXPECT_TRUE(w.converged);
  EXPECT_GE(w.value, classical_value_exact(m).value - 1e-6);
}

TEST(Certificate, CollinearVectors) {
  const BellFunctional m = oracle::random_functional(2, 3, 5);
  VectorStrategy vs;
  vs.n_inputs = 2;
  vs.n_outputs = 3;
  vs.dim = 2;
  Vector e = Vector::Zero(2);
  e(1) = 1.0;
  vs.u.assign(6, e);
  vs.v.assign(6, e);
  double sum = 0.0;
  for (double c : m.values()) sum += c;
  const CertificateResult r = vector_certificate_value(m, vs);
  EXPECT_NEAR(r.u_norm, 3.0, 1e-15);
  EXPECT_NEAR(r.value, std::abs(sum) / 9.0, 1e-12);
}

TEST(Certificate, ZeroVectorsAndBudget) {
  VectorStrategy vs;
  vs.n_inputs = 2;
  vs.n_outputs = 2;
  vs.dim = 3;
  vs.u.assign(4, Vector::Zero(3));
  vs.v.assign(4, Vector::Zero(3));
  EXPECT_THROW(vector_certificate_value(chsh_game(), vs), InvalidArgument);
  const SignTensor s = gen_signs(12, 1);
  EXPECT_THROW(vector_certificate_value(build_bell(s), sign_row_vectors(s), 100.0), BudgetExceeded);
}

TEST(Certificate, SignRowVectors) {
  const SignTensor one = gen_signs(1, 3);
  const VectorStrategy v1 = sign_row_vectors(one);
  ASSERT_EQ(v1.u_at(0, 0).size(), 1);
  EXPECT_EQ(v1.u_at(0, 0)(0), one(0, 0, 0));
  const SignTensor s = gen_signs(6, 2);
  const VectorStrategy v = sign_row_vectors(s);
  for (int x = 0; x < 6; ++x) {
    for (int a = 0; a < 6; ++a) EXPECT_DOUBLE_EQ(v.u_at(x, a).norm(), std::sqrt(6.0));
    EXPECT_EQ(v.u_at(x, 6).norm(), 0.0);
  }
}

TEST(Certificate, BelowOmega) {
  for (int n : {2, 3}) {
    const SignTensor s = gen_signs(n, 4);
    const BellFunctional m = build_bell(s);
    const double cert = vector_certificate_value(m, sign_row_vectors(s)).value;
    EXPECT_GT(cert, 0.0);
    EXPECT_LE(cert, omega_op(m).value + 1e-5);
  }
}

TEST(Certificate, MapNormGrayCodeMatchesBruteForce) {
  CounterRng rng(2);
  std::vector<Vector> w;
  for (int i = 0; i < 2 * 5; ++i) {
    Vector v(3);
    for (Index j = 0; j < 3; ++j) v(j) = rng.normal();
    w.push_back(v);
  }
  double brute = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int mask = 0; mask < 32; ++mask) {
      Vector s = Vector::Zero(3);
      for (int a = 0; a < 5; ++a) s += ((mask >> a) & 1 ? -1.0 : 1.0) * w[static_cast<std::size_t>(x * 5 + a)];
      brute = std::max(brute, s.norm());
    }
  EXPECT_NEAR(vector_map_norm(w, 2, 5), brute, 1e-12);
}

// Empirical rank ceiling: omega_op / classical ≤ n on the construction.
TEST(Omega, RatioOverClassicalBelowRank) {
  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const BellFunctional m = build_bell(gen_signs(n, seed));
      const OmegaResult w = omega_op(m);
      EXPECT_TRUE(w.converged);
      EXPECT_LE(w.value / classical_value_exact(m).value, 1.0 * n);
    }
}
