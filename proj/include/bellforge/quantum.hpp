#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellforge/povm.hpp"
#include "bellforge/scenario.hpp"
#include "bellforge/sdp.hpp"
#include "bellforge/state.hpp"

namespace bellforge {

/// Σ_{x,y,a,b} M(x,y,a,b) E_x^a ⊗ F_y^b, dimension dA·dB.
SymMatrix bell_operator(const BellFunctional& m, const PovmFamily& alice, const PovmFamily& bob);

/// ⟨φ| Σ M E⊗F |φ⟩ for a Schmidt state, without forming the Bell operator.
double quantum_value(const BellFunctional& m, const PovmFamily& alice, const PovmFamily& bob,
                     const SchmidtState& state);

enum class Party { alice, bob };

enum class BestResponseMethod { forced, two_outcome_spectral, sdp, projected_gradient };

std::string to_string(BestResponseMethod m);

/// One input's measurement and its subproblem value Σ_a tr(E_a C_a).
struct BestResponse {
  std::vector<SymMatrix> elements;
  double value = 0.0;
  BestResponseMethod method = BestResponseMethod::forced;
  /// True when the incumbent was at least as good and was returned instead.
  bool kept_incumbent = false;
};

/// Maximizes Σ_a tr(E_a C_a) over POVMs {E_a} on the space of the C_a.
/// K = 1 is forced; K = 2 uses the spectral solution E_1 = projector onto
/// the nonnegative part of C_1 − C_2; K ≥ 3 solves the SDP on a block Gram
/// matrix and falls back to projected gradient if that does not converge.
/// The result is projected to an exact POVM; with an incumbent it is never
/// worse than the incumbent.
BestResponse best_response_for_costs(const std::vector<SymMatrix>& costs,
                                     const std::vector<SymMatrix>* incumbent = nullptr,
                                     const SdpSettings& settings = {});

/// Projected-gradient ascent with a Dykstra projection onto
/// {E_a ⪰ 0, Σ_a E_a = I}. Used as the fallback above; exposed for testing.
BestResponse best_response_projected_gradient(const std::vector<SymMatrix>& costs,
                                              int max_iter = 500, double tol = 1e-10);

/// Cost matrices for one input of `party`: for Alice
/// C_x^a = Σ_{y,b} M(x,y,a,b) D F_y^b D with D = diag(α); Bob symmetric.
std::vector<SymMatrix> response_costs(const BellFunctional& m, const PovmFamily& other,
                                      const SchmidtState& state, Party party, int input);

/// Best response of `party` at `input` against the other side's family.
BestResponse povm_best_response(const BellFunctional& m, const PovmFamily& other,
                                const SchmidtState& state, Party party, int input,
                                const std::vector<SymMatrix>* incumbent = nullptr,
                                const SdpSettings& settings = {});

struct SeesawConfig {
  Index dim = 2;
  int max_rounds = 200;
  int restarts = 8;
  std::uint64_t seed = 0;
  /// Empty: free state, updated to the top eigenvector each round.
  /// Set: state fixed (its dimension must equal `dim`).
  std::optional<SchmidtState> fixed_state;
  double tol = 1e-9;
  int jobs = 1;
  /// If set, one extra restart starts from these deterministic strategies
  /// (E_x^a = I at a = choice(x)), so the result is at least their value.
  std::optional<StrategyPair> deterministic_start;
  SdpSettings sdp{1e-8, 2000, 1.0, true};

  void validate() const;
};

struct SeesawResult {
  double value = 0.0;
  PovmFamily alice;
  PovmFamily bob;
  SchmidtState state = SchmidtState::maximally_entangled(1);
  int best_restart = 0;
  int rounds = 0;
  bool converged = false;
  /// Value after every step of the best restart (Alice, Bob, state, ...).
  std::vector<double> history;
  /// How many best responses were computed by each method, in the order of
  /// BestResponseMethod.
  std::vector<int> method_counts = std::vector<int>(4, 0);
};

/// Alternating best responses (all Alice inputs, all Bob inputs, then the
/// state in free mode). Each restart starts from random rank-one
/// perturbations of the uniform POVM E_a = I/K; restarts are independent and
/// reduced in index order, so the result does not depend on `jobs`.
/// Stops when a full round improves by less than tol three times in a row.
SeesawResult seesaw(const BellFunctional& m, const SeesawConfig& cfg);

struct MaxEntangledResult {
  Index best_dim = 0;
  double value = 0.0;
  std::vector<double> values;  // per entry of `dims`
};

/// max over k in `dims` of the see-saw with the state fixed to ψ_k.
MaxEntangledResult max_entangled_value(const BellFunctional& m, const std::vector<Index>& dims,
                                       const SeesawConfig& base = {});

}  // namespace bellforge
