#pragma once

#include <span>
#include <variant>
#include <vector>

#include "bellforge/linalg.hpp"

namespace bellforge {

/// Pure bipartite state Σ_i α_i |ii⟩ in Schmidt form: α nonincreasing,
/// nonnegative, Σ α_i² = 1 within 1e-12.
class SchmidtState {
 public:
  static constexpr double kNormTol = 1e-12;

  /// Validates the invariants; throws InvalidArgument if any fails.
  explicit SchmidtState(std::vector<double> alphas);

  /// Normalizes and sorts arbitrary nonnegative coefficients.
  static SchmidtState normalized(std::vector<double> coefficients);

  static SchmidtState maximally_entangled(Index dim);

  Index dim() const noexcept { return static_cast<Index>(alphas_.size()); }
  std::span<const double> alphas() const noexcept { return alphas_; }
  double operator[](std::size_t i) const { return alphas_[i]; }
  Vector as_vector() const { return Eigen::Map<const Vector>(alphas_.data(), dim()); }

 private:
  std::vector<double> alphas_;
};

namespace profile {
struct Explicit {
  std::vector<double> alphas;
};
/// α|11⟩ + √(1−α²)/√n Σ_{i=2}^{n+1}|ii⟩ (dimension n + 1).
struct TwoLevel {
  double alpha_top = 0.0;
  int n = 1;
};
struct MaximallyEntangled {
  Index dim = 1;
};
}  // namespace profile

using StateProfile = std::variant<profile::Explicit, profile::TwoLevel, profile::MaximallyEntangled>;

/// Builds a normalized, sorted Schmidt state from one of the profiles.
/// Throws InvalidArgument on an all-zero or negative profile.
SchmidtState build_state(const StateProfile& profile);

}  // namespace bellforge
