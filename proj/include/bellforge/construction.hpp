#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellforge/classical.hpp"
#include "bellforge/povm.hpp"
#include "bellforge/scenario.hpp"
#include "bellforge/state.hpp"

namespace bellforge {

enum class SignDistribution { bernoulli, gaussian };

std::string to_string(SignDistribution d);
SignDistribution parse_distribution(const std::string& s);

/// Random family ε_{x,a}^k, all three indices in [0, n). Entry (x,a,k) is
/// draw number (x·n + a)·n + k of the counter stream for `seed`:
/// Bernoulli takes the sign of the top bit (set ↦ −1), Gaussian consumes the
/// draws 2i and 2i+1 through Box-Muller.
class SignTensor {
 public:
  SignTensor(int n, std::uint64_t seed, SignDistribution dist, std::vector<double> eps);

  int n() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  SignDistribution distribution() const noexcept { return dist_; }

  double operator()(int x, int a, int k) const { return eps_[index(x, a, k)]; }
  std::span<const double> values() const noexcept { return eps_; }

  /// FNV-1a over (n, seed, distribution, entries); tags derived objects.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  std::size_t index(int x, int a, int k) const {
    return (static_cast<std::size_t>(x) * n_ + a) * n_ + k;
  }

  int n_;
  std::uint64_t seed_;
  SignDistribution dist_;
  std::vector<double> eps_;
  std::uint64_t fingerprint_;
};

SignTensor gen_signs(int n, std::uint64_t seed, SignDistribution dist = SignDistribution::bernoulli);

/// M(x,y,a,b) = (1/n²) Σ_k ε_{x,a}^k ε_{y,b}^k for a, b < n and 0 on the
/// padding output a = n or b = n. Scenario (n inputs, n + 1 outputs).
BellFunctional build_bell(const SignTensor& signs);

/// K₂ = max_x ‖(ε_{x,a}^k / √n)_{a,k}‖.
double row_spectral_bound(const SignTensor& signs);

/// E_x^a = u uᵀ / (nK) with u = (1, ε_{x,a}^1, …, ε_{x,a}^n) for a < n, and
/// E_x^n = I − Σ_{a<n} E_x^a. Throws InvalidPovm with the witness eigenvalue
/// if the completing element falls below −1e-10.
PovmFamily build_povms(const SignTensor& signs, double k_constant);

/// Closed-form decomposition of ⟨φ| Σ M E⊗E |φ⟩ for the construction.
struct QuantumTerms {
  double total = 0.0;
  double term_i = 0.0;
  double term_ii = 0.0;
  double term_iii = 0.0;
  /// (2/K²) α₁ Σ_{i≥2} α_i, the guaranteed lower bound on term II.
  double term_ii_bound = 0.0;
};

/// Throws ProvenanceMismatch unless `m` and `povm` were built from `signs`,
/// DimensionError unless the state has dimension n + 1.
QuantumTerms explicit_quantum_value(const SignTensor& signs, const BellFunctional& m,
                                    const PovmFamily& povm, const SchmidtState& state);

struct ConstructOptions {
  SignDistribution distribution = SignDistribution::bernoulli;
  int retry_cap = 3;
  double classical_budget = kDefaultEnumerationBudget;
  int local_restarts = 64;
  /// Also compute the exact epsilon norm when (2K)^N fits the budget.
  bool epsilon_norm = false;
  int jobs = 1;
};

struct ConstructionReport {
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t seed_used = 0;
  int retries = 0;
  SignDistribution distribution = SignDistribution::bernoulli;
  double alpha_top = 0.0;
  std::vector<double> alphas;
  double k2 = 0.0;
  double k_constant = 0.0;
  ClassicalResult classical;
  std::string classical_method;  // "exact" or "local"
  std::optional<double> epsilon_norm;
  double quantum_lb = 0.0;
  QuantumTerms terms;
  double ratio = 0.0;
  double povm_min_eigenvalue = 0.0;
  double povm_completeness = 0.0;
  bool accepted = false;
};

/// Default top Schmidt coefficient: maximizes α√(1−α²), the size of the
/// guaranteed term.
inline constexpr double kDefaultAlphaTop = 0.70710678118654752440;

/// gen_signs → K₂ → K = 2K₂² → build_bell → build_povms → two-level state →
/// closed form → classical value (exact when within budget, else local
/// search) → ratio. Draws failing validate_povm at 1e-9 are resampled with
/// seed + 1, … up to `retry_cap` times; exhausting it throws Error.
ConstructionReport construct_report(int n, std::uint64_t seed, double alpha_top,
                                    const ConstructOptions& opt = {});

}  // namespace bellforge
