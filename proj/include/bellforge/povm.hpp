#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bellforge/linalg.hpp"

namespace bellforge {

/// Identifies POVMs produced by the explicit construction: the sign tensor
/// fingerprint and the constant K used in the normalization.
struct ConstructionTag {
  std::uint64_t fingerprint = 0;
  double k_constant = 0.0;
};

/// Per-input families of d×d PSD matrices summing to the identity. Elements
/// are stored input-major: element(x, a) = elements[x * n_outputs + a].
class PovmFamily {
 public:
  PovmFamily() = default;
  PovmFamily(int n_inputs, int n_outputs, Index dim);
  PovmFamily(int n_inputs, int n_outputs, Index dim, std::vector<SymMatrix> elements);

  /// Every input measured with E_a = I / K.
  static PovmFamily uniform(int n_inputs, int n_outputs, Index dim);

  int n_inputs() const noexcept { return n_inputs_; }
  int n_outputs() const noexcept { return n_outputs_; }
  Index dim() const noexcept { return dim_; }

  const SymMatrix& element(int x, int a) const { return elements_[slot(x, a)]; }
  SymMatrix& element(int x, int a) { return elements_[slot(x, a)]; }
  const std::vector<SymMatrix>& elements() const noexcept { return elements_; }

  /// Conjugates every element: E -> Rᵀ E R (R must be d×d).
  PovmFamily rotated(const Matrix& r) const;

  std::optional<ConstructionTag> tag;

 private:
  std::size_t slot(int x, int a) const {
    return static_cast<std::size_t>(x) * n_outputs_ + a;
  }

  int n_inputs_ = 0;
  int n_outputs_ = 0;
  Index dim_ = 0;
  std::vector<SymMatrix> elements_;
};

struct PovmReport {
  bool pass = true;
  double tol = 0.0;
  /// min eigenvalue of each element, same layout as PovmFamily::elements().
  std::vector<double> min_eigenvalues;
  /// ‖Σ_a E_x^a − I‖_F per input.
  std::vector<double> completeness_residuals;
  double worst_min_eigenvalue = 0.0;
  double worst_completeness = 0.0;
};

/// Positivity and completeness check. Passes iff every element has min
/// eigenvalue ≥ −tol and every completeness residual is ≤ tol.
PovmReport validate_povm(const PovmFamily& p, double tol);

}  // namespace bellforge
