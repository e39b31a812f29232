#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bellforge/bell_model.hpp"
#include "bellforge/classical.hpp"
#include "bellforge/construction.hpp"
#include "bellforge/error.hpp"
#include "bellforge/quantum.hpp"
#include "oracles.hpp"

using namespace bellforge;

namespace {

constexpr double kTsirelson = 0.85355339059327373;

SymMatrix random_cost(Index d, CounterRng& rng) {
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = rng.normal();
  return SymMatrix::symmetrized(a);
}

double costs_value(const std::vector<SymMatrix>& c, const std::vector<SymMatrix>& e) {
  double v = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a) v += inner(c[a], e[a]);
  return v;
}

void expect_povm(const std::vector<SymMatrix>& e, double tol) {
  Matrix s = Matrix::Zero(e[0].dim(), e[0].dim());
  for (const auto& m : e) {
    EXPECT_GE(min_eigenvalue(m), -tol);
    s += m.dense();
  }
  EXPECT_LT((s - Matrix::Identity(s.rows(), s.cols())).norm(), tol);
}

}  // namespace

TEST(BellOperator, TrivialCases) {
  const PovmFamily one(1, 1, 2, {SymMatrix::identity(2)});
  BellFunctional m(Scenario{1, 1});
  EXPECT_EQ(bell_operator(m, one, one).dense().norm(), 0.0);
  m.at(0, 0, 0, 0) = 1.0;
  EXPECT_EQ((bell_operator(m, one, one).dense() - Matrix::Identity(4, 4)).norm(), 0.0);
  EXPECT_THROW(bell_operator(chsh_game(), one, one), Error);
}

TEST(BellOperator, PositiveFunctionalGivesPsdOperator) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BellFunctional m = oracle::random_functional(2, 3, seed, true);
    const auto a = oracle::random_povm(2, 3, 3, seed + 10);
    const auto b = oracle::random_povm(2, 3, 3, seed + 20);
    EXPECT_GE(min_eigenvalue(bell_operator(m, a, b)), -1e-9);
  }
}

TEST(BellOperator, ValueMatchesOperatorAndTable) {
  const BellFunctional m = oracle::random_functional(3, 2, 4);
  const auto a = oracle::random_povm(3, 2, 3, 5);
  const auto b = oracle::random_povm(3, 2, 3, 6);
  const SchmidtState st = oracle::random_state(3, 7);
  const double v = quantum_value(m, a, b, st);
  const Vector phi = oracle::state_vector(st);
  EXPECT_NEAR(v, phi.dot(bell_operator(m, a, b).dense() * phi), 1e-12);
  EXPECT_NEAR(v, pair(m, quantum_prob_pure(a, b, st)), 1e-12);
}

TEST(BestResponse, ForcedAndDominance) {
  CounterRng rng(1);
  const SymMatrix c = random_cost(3, rng);
  const BestResponse f = best_response_for_costs({c});
  EXPECT_EQ(f.method, BestResponseMethod::forced);
  EXPECT_NEAR(f.value, c.trace(), 1e-12);
  // C1 ⪰ C2 ⪰ C3: E1 = I.
  const SymMatrix c3 = random_cost(3, rng);
  const SymMatrix c2 = c3 + SymMatrix::identity(3) * 0.5;
  const SymMatrix c1 = c2 + SymMatrix::identity(3) * 0.5;
  for (const auto& costs : {std::vector<SymMatrix>{c1, c2}, std::vector<SymMatrix>{c1, c2, c3}}) {
    const BestResponse r = best_response_for_costs(costs);
    EXPECT_NEAR(r.value, c1.trace(), 1e-6);
    expect_povm(r.elements, 1e-8);
  }
}

TEST(BestResponse, TwoOutcomeMatchesGrid) {
  CounterRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<SymMatrix> c{random_cost(2, rng), random_cost(2, rng)};
    const BestResponse r = best_response_for_costs(c);
    EXPECT_EQ(r.method, BestResponseMethod::two_outcome_spectral);
    // E1 = R(θ) diag(l1, l2) R(θ)ᵀ over a grid.
    double best = -1e300;
    const int steps = 60;
    for (int it = 0; it < 2 * steps; ++it) {
      const double th = std::numbers::pi * it / (2 * steps);
      Matrix rot(2, 2);
      rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) {
          Matrix d = Matrix::Zero(2, 2);
          d(0, 0) = i / 10.0;
          d(1, 1) = j / 10.0;
          const SymMatrix e1 = SymMatrix::symmetrized(rot * d * rot.transpose());
          const SymMatrix e2 = SymMatrix::identity(2) - e1;
          best = std::max(best, inner(c[0], e1) + inner(c[1], e2));
        }
    }
    EXPECT_GE(r.value, best - 1e-12);
    EXPECT_LE(r.value, best + 1e-2);  // grid resolution
    expect_povm(r.elements, 1e-10);
  }
}

TEST(BestResponse, SdpAgreesWithProjectedGradientAndBeatsRandom) {
  CounterRng rng(9);
  for (int trial = 0; trial < 4; ++trial) {
    const std::vector<SymMatrix> c{random_cost(3, rng), random_cost(3, rng), random_cost(3, rng)};
    const BestResponse s = best_response_for_costs(c);
    const BestResponse g = best_response_projected_gradient(c, 3000, 1e-12);
    expect_povm(s.elements, 1e-8);
    expect_povm(g.elements, 1e-8);
    EXPECT_GE(s.value, g.value - 1e-5);
    for (int k = 0; k < 20; ++k) {
      const auto p = oracle::random_povm(1, 3, 3, 1000 * trial + k);
      EXPECT_GE(s.value, costs_value(c, p.elements()) - 1e-6);
    }
  }
}

TEST(BestResponse, IncumbentIsKeptWhenBetter) {
  CounterRng rng(3);
  const std::vector<SymMatrix> c{random_cost(2, rng), random_cost(2, rng), random_cost(2, rng)};
  const BestResponse opt = best_response_for_costs(c);
  const BestResponse again = best_response_for_costs(c, &opt.elements);
  EXPECT_GE(again.value, opt.value - 1e-15);
}

TEST(Seesaw, ChshFreeState) {
  SeesawConfig cfg;
  cfg.dim = 2;
  cfg.restarts = 4;
  const SeesawResult r = seesaw(chsh_game(), cfg);
  EXPECT_GE(r.value, kTsirelson - 1e-4);
  EXPECT_LE(r.value, kTsirelson + 1e-9);
  EXPECT_TRUE(validate_povm(r.alice, 1e-8).pass);
  EXPECT_TRUE(validate_povm(r.bob, 1e-8).pass);
  double norm = 0.0;
  for (double a : r.state.alphas()) norm += a * a;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_NEAR(quantum_value(chsh_game(), r.alice, r.bob, r.state), r.value, 1e-12);
}

TEST(Seesaw, HistoryIsMonotone) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SeesawConfig cfg;
    cfg.dim = 3;
    cfg.restarts = 2;
    cfg.seed = seed;
    const SeesawResult r = seesaw(oracle::random_functional(3, 3, seed), cfg);
    for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1] - 1e-9);
  }
}

TEST(Seesaw, ZeroFunctionalAndProductState) {
  SeesawConfig cfg;
  cfg.restarts = 2;
  EXPECT_NEAR(seesaw(BellFunctional(Scenario{2, 2}), cfg).value, 0.0, 1e-15);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const BellFunctional m = oracle::random_functional(2 + seed % 2, 2 + seed % 2, 40 + seed);
    SeesawConfig fixed;
    fixed.dim = 2;
    fixed.restarts = 3;
    fixed.fixed_state = SchmidtState({1.0, 0.0});
    EXPECT_LE(seesaw(m, fixed).value, classical_value_exact(m).max_value + 1e-9);
  }
}

TEST(Seesaw, JobsDoNotChangeResult) {
  const BellFunctional m = oracle::random_functional(2, 3, 8);
  SeesawConfig cfg;
  cfg.dim = 2;
  cfg.restarts = 3;
  const SeesawResult a = seesaw(m, cfg);
  cfg.jobs = 3;
  const SeesawResult b = seesaw(m, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(Seesaw, DeterministicStartReachesClassical) {
  const BellFunctional m = build_bell(gen_signs(3, 2));
  const ClassicalResult cl = classical_value_exact(m);
  SeesawConfig cfg;
  cfg.dim = 2;
  cfg.restarts = 1;
  cfg.deterministic_start = cl.argmax;
  EXPECT_GE(seesaw(m, cfg).value, cl.max_value - 1e-12);
}

TEST(Seesaw, ConfigValidation) {
  SeesawConfig cfg;
  cfg.dim = 0;
  EXPECT_THROW(seesaw(chsh_game(), cfg), InvalidArgument);
  cfg.dim = 3;
  cfg.fixed_state = SchmidtState::maximally_entangled(2);
  EXPECT_THROW(seesaw(chsh_game(), cfg), DimensionError);
}

TEST(MaxEntangled, ChshAndDimensionOne) {
  SeesawConfig base;
  base.restarts = 4;
  const MaxEntangledResult r = max_entangled_value(chsh_game(), {2}, base);
  EXPECT_EQ(r.best_dim, 2);
  EXPECT_GE(r.value, kTsirelson - 1e-4);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const BellFunctional m = oracle::random_functional(3, 2, 70 + seed);
    EXPECT_LE(max_entangled_value(m, {1}, base).value, classical_value_exact(m).max_value + 1e-6);
  }
  EXPECT_THROW(max_entangled_value(chsh_game(), {}, base), InvalidArgument);
}
