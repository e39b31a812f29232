#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bellforge/linalg.hpp"
#include "bellforge/scenario.hpp"

namespace bellforge {

class SignTensor;

/// One entry of a sparse symmetric matrix. Entries are kept canonical
/// (i ≤ j); an off-diagonal entry v stands for A(i,j) = A(j,i) = v.
struct SymEntry {
  Index i = 0;
  Index j = 0;
  double v = 0.0;
};

/// Sparse symmetric matrix with canonical, merged entries.
class SparseSym {
 public:
  SparseSym() = default;

  /// Adds v to A(i,j) and A(j,i) (once if i == j).
  void add(Index i, Index j, double v);

  /// Frobenius product ⟨A, G⟩ with a dense symmetric G.
  double dot(const Matrix& g) const;
  /// G += s·A.
  void axpy(double s, Matrix& g) const;

  Matrix dense(Index m) const;
  const std::vector<SymEntry>& entries() const noexcept { return entries_; }
  double frobenius_norm() const;

 private:
  std::vector<SymEntry> entries_;
};

struct EqConstraint {
  SparseSym a;
  double b = 0.0;
};

enum class Sense { maximize, minimize };

/// Linear program over a PSD Gram matrix G (size m): optimize ⟨Obj, G⟩
/// subject to ⟨A_i, G⟩ = b_i.
struct GramProblem {
  Index m = 0;
  SparseSym objective;
  std::vector<EqConstraint> constraints;
  Sense sense = Sense::maximize;
  /// Optional m×r matrix Q with orthonormal columns such that every feasible
  /// G has the form Q H Qᵀ. When set the solver works on H (facial
  /// reduction); empty means the full cone.
  Matrix face;
};

/// Gram index layout of the relaxation for scenario (N, K): 0 ↦ z,
/// 1 + x·K + a ↦ u_x^a, 1 + N·K + y·K + b ↦ v_y^b.
struct GramLayout {
  int n_inputs;
  int n_outputs;
  Index z() const { return 0; }
  Index u(int x, int a) const { return 1 + static_cast<Index>(x) * n_outputs + a; }
  Index v(int y, int b) const {
    return 1 + static_cast<Index>(n_inputs) * n_outputs + static_cast<Index>(y) * n_outputs + b;
  }
  Index size() const { return 1 + 2 * static_cast<Index>(n_inputs) * n_outputs; }
};

/// Encodes the vector program: ‖z‖ = 1, Σ_a u_x^a = Σ_b v_y^b = z and
/// ⟨u_x^a, u_x^a'⟩ = ⟨v_y^b, v_y^b'⟩ = 0 for a ≠ a', objective
/// Σ M(x,y,a,b) ⟨u_x^a, v_y^b⟩. The sum-to-z condition is carried by the
/// two atomic equalities Σ_a ⟨u_x^a, z⟩ = 1 and Σ_a ‖u_x^a‖² = 1, which
/// together with orthogonality force ‖Σ_a u_x^a − z‖² = 0. Because of that
/// the vectors e_z − Σ_a e_{u_x^a} lie in the kernel of every feasible G;
/// `face` is set to the orthogonal complement of their span.
GramProblem build_op_gram(const BellFunctional& m, Sense sense = Sense::maximize);

struct SdpSettings {
  double tol = 1e-7;
  int max_iter = 20000;
  /// Initial penalty; adapted ×2 / ÷2 by residual balancing.
  double penalty = 1.0;
  bool adapt_penalty = true;
};

/// Initial primal iterate; multipliers start at zero.
struct SdpWarmStart {
  Matrix x;
};

struct SdpSolution {
  /// ⟨Obj, G⟩ at the returned PSD iterate.
  double value = 0.0;
  /// Dual objective bᵀy in the problem's sense.
  double dual_value = 0.0;
  SymMatrix gram;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Alternating-direction augmented Lagrangian method on the dual: an affine
/// step for the multipliers, a PSD-cone projection (psd_project), and the
/// primal update. Stops when relative primal and dual residuals and the
/// relative duality gap are all ≤ tol. On hitting max_iter the solution is
/// returned with converged = false and its residuals.
SdpSolution solve_sdp(const GramProblem& p, const SdpSettings& settings = {},
                      const SdpWarmStart* warm = nullptr);

struct OmegaResult {
  /// max(|max|, |min|) over both senses.
  double value = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  SdpSolution max_solution;
  SdpSolution min_solution;
  bool converged = false;
};

OmegaResult omega_op(const BellFunctional& m, const SdpSettings& settings = {});

/// Vector families u_x^a, v_y^b in a real space of dimension `dim`, stored
/// input-major like POVM elements.
struct VectorStrategy {
  int n_inputs = 0;
  int n_outputs = 0;
  Index dim = 0;
  std::vector<Vector> u;
  std::vector<Vector> v;
  const Vector& u_at(int x, int a) const { return u[static_cast<std::size_t>(x) * n_outputs + a]; }
  const Vector& v_at(int y, int b) const { return v[static_cast<std::size_t>(y) * n_outputs + b]; }
};

/// max_x max_{s ∈ {±1}^K} ‖Σ_a s_a w_x^a‖, the norm of the map ℓ1^N(ℓ∞^K) → ℓ2
/// sending e_x ⊗ e_a to w_x^a (extreme points e_x ⊗ s). Zero vectors are
/// skipped in the sign enumeration.
double vector_map_norm(const std::vector<Vector>& w, int n_inputs, int n_outputs);

struct CertificateResult {
  double value = 0.0;
  double pairing = 0.0;
  double u_norm = 0.0;
  double v_norm = 0.0;
};

/// |Σ M ⟨u_x^a, v_y^b⟩| / (‖u‖ ‖v‖), a lower bound on the γ₂*-type norm of M.
/// Throws BudgetExceeded when 2^(r−1)·N exceeds `budget` (r = most nonzero
/// vectors on one input, at most K), InvalidArgument on a zero map norm.
CertificateResult vector_certificate_value(const BellFunctional& m, const VectorStrategy& vs,
                                           double budget = 1e8);

/// u_x^a = v_x^a = Σ_p ε_{x,a}^p e_p for a < n; the padding output gets the
/// zero vector. Paired with build_bell(signs) this certifies linear growth.
VectorStrategy sign_row_vectors(const SignTensor& signs);

}  // namespace bellforge
