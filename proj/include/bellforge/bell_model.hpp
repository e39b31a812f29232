#pragma once

#include "bellforge/povm.hpp"
#include "bellforge/scenario.hpp"
#include "bellforge/state.hpp"

namespace bellforge {

/// ⟨M, P⟩ = Σ M(x,y,a,b) P(a,b|x,y). Throws ScenarioMismatch.
double pair(const BellFunctional& m, const ProbabilityTable& p);

struct NonSignallingCheck {
  bool ok = true;
  /// Largest deviation of a one-party marginal across the other party's inputs.
  double residual = 0.0;
};

NonSignallingCheck check_nonsignalling(const ProbabilityTable& p, double tol);

/// p(a,b|x,y) = Σ_{i,j} α_i α_j E_x^a(i,j) F_y^b(i,j), i.e. ⟨φ|E⊗F|φ⟩ for the
/// real Schmidt state φ = Σ α_i |ii⟩. Both families are validated at 1e-8.
ProbabilityTable quantum_prob_pure(const PovmFamily& alice, const PovmFamily& bob,
                                   const SchmidtState& state);

/// Point mass at (x, y, sA(x), sB(y)).
ProbabilityTable deterministic_prob(const Scenario& s, const DeterministicStrategy& alice,
                                    const DeterministicStrategy& bob);

/// |quantum_value| / classical_value. Throws UndefinedRatio when the
/// classical value is ≤ 1e-15 (the 0/0 case).
double zeta1(double quantum_value, double classical_value);

/// The CHSH game as a Bell functional: weight 1/4 on every (x,y,a,b) with
/// a ⊕ b = x ∧ y.
BellFunctional chsh_game();

}  // namespace bellforge
