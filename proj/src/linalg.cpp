#include "bellforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellforge/error.hpp"

namespace bellforge {

SymMatrix SymMatrix::identity(Index dim) {
  SymMatrix s;
  s.m_ = Matrix::Identity(dim, dim);
  return s;
}

SymMatrix SymMatrix::from_dense(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("SymMatrix requires a square matrix, got " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()));
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = a.size() == 0 ? 0.0 : (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw InvalidArgument("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  return symmetrized(a);
}

SymMatrix SymMatrix::symmetrized(const Matrix& a) {
  SymMatrix s;
  s.m_ = 0.5 * (a + a.transpose());
  return s;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  m_ -= o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  return a.dense().cwiseProduct(b.dense()).sum();
}

SymMatrix kron(const SymMatrix& a, const SymMatrix& b, Index cap) {
  const Index da = a.dim();
  const Index db = b.dim();
  const Index required = da * db;
  if (required > cap) {
    throw DimensionError("kron result dimension " + std::to_string(required) +
                             " exceeds cap " + std::to_string(cap),
                         required);
  }
  Matrix out(required, required);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b.dense();
    }
  }
  // Products of symmetric factors are symmetric entry by entry.
  return SymMatrix::symmetrized(out);
}

EigDecomposition herm_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense());
  if (solver.info() != Eigen::Success) {
    const double residual =
        (a.dense() * solver.eigenvectors() - solver.eigenvectors() * solver.eigenvalues().asDiagonal())
            .norm();
    throw ConvergenceError("symmetric eigensolver did not converge", residual);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_norm(const Eigen::Ref<const Matrix>& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

SymMatrix psd_project(const SymMatrix& a) {
  if (a.dim() == 0) return a;
  const auto eig = herm_eig(a);
  const Vector clipped = eig.values.cwiseMax(0.0);
  return SymMatrix::symmetrized(eig.vectors * clipped.asDiagonal() * eig.vectors.transpose());
}

double min_eigenvalue(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(a.dim() - 1);
}

Matrix inverse_sqrt(const SymMatrix& s, double floor) {
  const auto eig = herm_eig(s);
  if (eig.values(0) <= floor) {
    throw InvalidArgument("inverse_sqrt: matrix is not positive definite (min eigenvalue " +
                          std::to_string(eig.values(0)) + ")");
  }
  const Vector inv = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

}  // namespace bellforge
