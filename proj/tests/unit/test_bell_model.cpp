#include <gtest/gtest.h>

#include "bellforge/bell_model.hpp"
#include "bellforge/error.hpp"
#include "oracles.hpp"

using namespace bellforge;

TEST(Scenario, IndexIsRowMajor) {
  const Scenario s{3, 4};
  EXPECT_EQ(s.size(), 144u);
  EXPECT_EQ(s.index(0, 0, 0, 1), 1u);
  EXPECT_EQ(s.index(0, 0, 1, 0), 4u);
  EXPECT_EQ(s.index(0, 1, 0, 0), 16u);
  EXPECT_EQ(s.index(1, 0, 0, 0), 48u);
}

TEST(BellModel, PairOnChsh) {
  const BellFunctional m = chsh_game();
  const Scenario s = m.scenario();
  const ProbabilityTable p = deterministic_prob(s, {{0, 0}}, {{0, 0}});
  EXPECT_DOUBLE_EQ(pair(m, p), 0.75);
  EXPECT_THROW(pair(m, deterministic_prob(Scenario{2, 3}, {{0, 0}}, {{0, 0}})), ScenarioMismatch);
}

TEST(BellModel, PairIsBilinear) {
  const BellFunctional m = oracle::random_functional(3, 3, 9);
  const auto a = oracle::random_povm(3, 3, 2, 1);
  const auto b = oracle::random_povm(3, 3, 2, 2);
  const ProbabilityTable p1 = quantum_prob_pure(a, b, oracle::random_state(2, 3));
  const ProbabilityTable p2 = deterministic_prob(m.scenario(), {{0, 2, 1}}, {{1, 1, 0}});
  for (double lambda : {0.0, 0.3, 0.77, 1.0}) {
    ProbabilityTable mix(m.scenario());
    for (std::size_t i = 0; i < mix.values().size(); ++i) {
      mix.values()[i] = lambda * p1.values()[i] + (1 - lambda) * p2.values()[i];
    }
    EXPECT_NEAR(pair(m, mix), lambda * pair(m, p1) + (1 - lambda) * pair(m, p2), 1e-12);
  }
}

TEST(BellModel, QuantumProbSumsToOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = oracle::random_povm(2, 4, 3, seed);
    const auto b = oracle::random_povm(2, 4, 3, seed + 50);
    const ProbabilityTable p = quantum_prob_pure(a, b, oracle::random_state(3, seed));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) s += p(x, y, i, j);
        EXPECT_NEAR(s, 1.0, 1e-10);
      }
    EXPECT_TRUE(check_nonsignalling(p, 1e-10).ok);
  }
}

TEST(BellModel, QuantumProbMatchesKronecker) {
  const auto a = oracle::random_povm(2, 2, 3, 4);
  const auto b = oracle::random_povm(2, 2, 3, 5);
  const SchmidtState st = oracle::random_state(3, 6);
  const ProbabilityTable p = quantum_prob_pure(a, b, st);
  BellFunctional unit(Scenario{2, 2});
  unit.at(1, 0, 1, 1) = 1.0;
  EXPECT_NEAR(p(1, 0, 1, 1), oracle::direct_value(unit, a, b, st), 1e-12);
}

TEST(BellModel, SignallingTableDetected) {
  ProbabilityTable p(Scenario{2, 2});
  // Alice's output copies Bob's input.
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) p.at(x, y, y, 0) = 1.0;
  const auto c = check_nonsignalling(p, 1e-9);
  EXPECT_FALSE(c.ok);
  EXPECT_NEAR(c.residual, 1.0, 1e-12);
}

TEST(BellModel, ProbabilityValidation) {
  ProbabilityTable p = deterministic_prob(Scenario{1, 2}, {{0}}, {{1}});
  EXPECT_NO_THROW(p.validate());
  p.at(0, 0, 0, 0) = -1e-13;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.prob(0, 0, 0, 0), 0.0);
  p.at(0, 0, 0, 0) = -1e-6;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(BellModel, Zeta1) {
  EXPECT_NEAR(zeta1(0.853553, 0.75), 0.853553 / 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(zeta1(-2.0, 1.0), 2.0);
  EXPECT_THROW(zeta1(0.0, 0.0), UndefinedRatio);
  EXPECT_THROW(zeta1(1.0, 1e-16), UndefinedRatio);
}

TEST(BellModel, ScenarioValidation) {
  EXPECT_THROW((Scenario{0, 2}.validate()), InvalidArgument);
  EXPECT_THROW(BellFunctional(Scenario{2, 2}, std::vector<double>(3)), DimensionError);
}

TEST(BellModel, ChshOnUniformTable) {
  ProbabilityTable p(Scenario{2, 2});
  for (double& v : p.values()) v = 0.25;
  EXPECT_DOUBLE_EQ(pair(chsh_game(), p), 0.5);
  EXPECT_EQ(pair(chsh_game(), ProbabilityTable(Scenario{2, 2})), 0.0);
}

TEST(BellModel, SingleOutcomeGivesAllOnes) {
  const PovmFamily one(2, 1, 3, std::vector<SymMatrix>(2, SymMatrix::identity(3)));
  const ProbabilityTable p = quantum_prob_pure(one, one, oracle::random_state(3, 1));
  for (double v : p.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(BellModel, SmallestConstructionHandValues) {
  const SignTensor s(1, 0, SignDistribution::bernoulli, {1.0});
  const BellFunctional m = build_bell(s);
  const PovmFamily e = build_povms(s, 2.0);
  const SchmidtState st({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  const ProbabilityTable p = quantum_prob_pure(e, e, st);
  EXPECT_NEAR(p(0, 0, 0, 0), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(pair(m, deterministic_prob(m.scenario(), {{0}}, {{0}})), 1.0);
  // Product state factorizes.
  const ProbabilityTable q = quantum_prob_pure(e, e, SchmidtState({1.0, 0.0}));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(q(0, 0, a, b), e.element(0, a)(0, 0) * e.element(0, b)(0, 0), 1e-12);
}

TEST(BellModel, DeterministicTableIsNonSignalling) {
  const ProbabilityTable p = deterministic_prob(Scenario{3, 2}, {{0, 1, 1}}, {{1, 0, 1}});
  const auto c = check_nonsignalling(p, 0.0);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.residual, 0.0);
  EXPECT_EQ(deterministic_prob(Scenario{1, 1}, {{0}}, {{0}})(0, 0, 0, 0), 1.0);
}

TEST(BellModel, SignallingByTenPercent) {
  ProbabilityTable p(Scenario{2, 2});
  for (int x = 0; x < 2; ++x) {
    p.at(x, 0, 0, 0) = 0.5;
    p.at(x, 0, 1, 1) = 0.5;
    p.at(x, 1, 0, 0) = 0.6;
    p.at(x, 1, 1, 1) = 0.4;
  }
  const auto c = check_nonsignalling(p, 1e-9);
  EXPECT_FALSE(c.ok);
  EXPECT_NEAR(c.residual, 0.1, 1e-12);
}
