#pragma once

#include <cstdint>

#include "bellforge/scenario.hpp"

namespace bellforge {

/// Extremes of ⟨M, P⟩ over local deterministic strategies.
/// `value` = max(|max_value|, |min_value|), the sup of |⟨M,P⟩| over the
/// local polytope. `argmax` attains max_value, `argmin` attains min_value.
struct ClassicalResult {
  double value = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  StrategyPair argmax;
  StrategyPair argmin;
  bool exact = false;
};

inline constexpr double kDefaultEnumerationBudget = 1e8;

struct ClassicalOptions {
  /// Upper limit on inner evaluations (K^N · N · K for the exact value).
  double budget = kDefaultEnumerationBudget;
  /// Worker threads for the enumeration; results do not depend on it.
  int jobs = 1;
};

/// Inner evaluations needed by classical_value_exact: K^N · N · K.
double classical_exact_cost(const Scenario& s);

/// Exact sup and inf of ⟨M,P⟩ over deterministic strategy pairs. Alice's
/// assignments are enumerated; Bob best-responds analytically per input.
/// Ties resolve to the lexicographically first Alice assignment and the
/// lowest Bob output. Throws BudgetExceeded when the cost is over budget.
ClassicalResult classical_value_exact(const BellFunctional& m, const ClassicalOptions& opt = {});

/// Alternating best-response ascent (and descent, for min_value) from
/// `restarts` seeded random Alice assignments. Always a lower bound on the
/// exact value; `exact` is false.
ClassicalResult classical_value_local(const BellFunctional& m, int restarts, std::uint64_t seed);

/// Inner evaluations needed by epsilon_norm_exact: (2K)^N · N · K / 2.
double epsilon_norm_cost(const Scenario& s);

/// Injective tensor norm of M on ℓ1^N(ℓ∞^K) ⊗ ℓ1^N(ℓ∞^K): the sup over signed
/// per-input output choices for Alice of Σ_y max_b |c_y(b)|. Never below the
/// classical value.
double epsilon_norm_exact(const BellFunctional& m, const ClassicalOptions& opt = {});

}  // namespace bellforge
