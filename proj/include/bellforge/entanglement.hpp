#pragma once

#include <string>
#include <vector>

#include "bellforge/povm.hpp"
#include "bellforge/scenario.hpp"
#include "bellforge/state.hpp"

namespace bellforge {

/// −Σ α_i² log₂ α_i² in bits, with 0·log 0 = 0.
double entropy_of_entanglement(const SchmidtState& state);

/// Entropy of the two-level state α|11⟩ + √(1−α²)/√n Σ_{i=2}^{n+1}|ii⟩:
/// α² log₂(1/α²) + (1−α²) log₂(n/(1−α²)).
double f_alpha(int n, double alpha);

struct DeltaClass {
  /// log₂(dim) − E < δ.
  bool max_entangled = false;
  /// E < δ.
  bool non_entangled = false;
  double entropy = 0.0;
  double gap = 0.0;  // log₂(dim) − E

  /// "delta_max_entangled", "delta_non_entangled", "both" or "neither".
  std::string label() const;
};

DeltaClass delta_classify(const SchmidtState& state, double delta);

/// α₁ · Σ_i α_i, never below 1 for a normalized state.
double iviol(const SchmidtState& state);

struct DyadicTerm {
  double beta = 0.0;
  /// 0-based indices; all inside one block [2^(k−1) − 1, 2^k − 2].
  std::vector<Index> indices;
};

struct DyadicDecomposition {
  Index source_dim = 0;
  std::vector<DyadicTerm> terms;

  double beta_sum() const;
  /// Σ_s β_s |A_s|^{-1/2} 1_{A_s}.
  Vector reconstruct() const;
};

/// 0-based block number k − 1 of index i (block k covers 1-based
/// positions 2^(k−1) … 2^k − 1).
int dyadic_block(Index i);

/// Upper bound on Σβ for a unit vector of length n: 2√(log₂ n), and 1 for
/// n = 1 where that formula vanishes.
double dyadic_beta_bound(Index n);

/// Writes a nonincreasing nonnegative vector with ‖a‖₂ ≤ 1 as a positive
/// combination of normalized block indicators. Inside each block the nested
/// prefix sets {first j indices} carry weight (t_j − t_{j+1})·√j, t_j being
/// the j-th value of the block and t_{m+1} = 0. Throws InvalidArgument on
/// unsorted, negative or over-long input.
DyadicDecomposition dyadic_decompose(const std::vector<double>& coeffs);

struct ExtractionResult {
  /// Support of the returned state (0-based) and its coefficients, all
  /// equal to |A|^{-1/2}.
  std::vector<Index> support;
  std::vector<double> coefficients;
  Index block_dim = 0;
  double value = 0.0;
  /// ⟨ψ|B|ψ⟩ of the input state.
  double c_value = 0.0;
  /// C / (4 log₂ d) (C for d = 1).
  double guarantee = 0.0;
  double best_cross = 0.0;
  int term_p = 0;
  int term_q = 0;
  double beta_sum = 0.0;
};

/// For a PSD Bell operator B = Σ M E⊗F: decomposes the state dyadically,
/// finds the largest cross term ⟨φ_q|B|φ_p⟩ and returns whichever of φ_p,
/// φ_q has the larger value. Throws PositivityError if the smallest
/// eigenvalue of B is below −1e-8, InvalidArgument unless ⟨ψ|B|ψ⟩ > 0.
ExtractionResult extract_max_entangled(const BellFunctional& m, const PovmFamily& alice,
                                       const PovmFamily& bob, const SchmidtState& state);

struct PolarizationResult {
  /// ξ = φ_p + i^k φ_q (not normalized).
  std::vector<Index> support_p;
  std::vector<Index> support_q;
  int phase = 0;
  double value = 0.0;
  /// ⟨ξ|B|ξ⟩ for k = 0, 1, 2, 3.
  std::vector<double> phase_values;
  /// |⟨ψ|B|ψ⟩|.
  double c_value = 0.0;
  /// C / (16 log₂ d) (C for d = 1).
  double guarantee = 0.0;
};

/// No positivity needed: picks the pair with the largest |⟨φ_q|B|φ_p⟩| and
/// the phase k ∈ {0,1,2,3} maximizing |⟨ξ|B|ξ⟩|, lowest k on ties.
PolarizationResult polarization_select(const BellFunctional& m, const PovmFamily& alice,
                                       const PovmFamily& bob, const SchmidtState& state);

}  // namespace bellforge
