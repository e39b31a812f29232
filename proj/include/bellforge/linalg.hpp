#pragma once

#include <Eigen/Dense>

namespace bellforge {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. Entries are stored in full and kept exactly
/// symmetric: every constructor symmetrizes, and every mutating operation
/// preserves the property.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Index dim) : m_(Matrix::Zero(dim, dim)) {}

  static SymMatrix identity(Index dim);

  /// Accepts `a` if it is symmetric to within `tol * max(1, max|a_ij|)` and
  /// stores (a + aᵀ)/2. Throws InvalidArgument otherwise.
  static SymMatrix from_dense(const Matrix& a, double tol = 1e-12);

  /// Stores (a + aᵀ)/2 without checking.
  static SymMatrix symmetrized(const Matrix& a);

  Index dim() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Matrix& dense() const noexcept { return m_; }

  /// Sets both (i,j) and (j,i).
  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  double trace() const { return m_.trace(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

 private:
  Matrix m_;
};

/// Frobenius inner product tr(AB) for symmetric operands.
double inner(const SymMatrix& a, const SymMatrix& b);

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
struct EigDecomposition {
  Vector values;
  Matrix vectors;
};

inline constexpr Index kDefaultKronCap = 4096;

/// (A ⊗ B)(i·dimB + p, j·dimB + q) = A(i,j)·B(p,q). Throws DimensionError
/// carrying the required size when dimA·dimB exceeds `cap`.
SymMatrix kron(const SymMatrix& a, const SymMatrix& b, Index cap = kDefaultKronCap);

EigDecomposition herm_eig(const SymMatrix& a);

/// Largest singular value of a (possibly rectangular) matrix.
double spectral_norm(const Eigen::Ref<const Matrix>& a);

/// Frobenius-nearest positive semidefinite matrix (negative eigenvalues
/// clipped to zero).
SymMatrix psd_project(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);
double max_eigenvalue(const SymMatrix& a);

/// S^{-1/2} for a positive definite S. Throws InvalidArgument if the smallest
/// eigenvalue is not above `floor`.
Matrix inverse_sqrt(const SymMatrix& s, double floor = 1e-14);

}  // namespace bellforge
