#include "bellforge/povm.hpp"

#include <algorithm>
#include <string>

#include "bellforge/error.hpp"

namespace bellforge {

PovmFamily::PovmFamily(int n_inputs, int n_outputs, Index dim)
    : n_inputs_(n_inputs), n_outputs_(n_outputs), dim_(dim) {
  if (n_inputs < 1 || n_outputs < 1 || dim < 1) {
    throw InvalidArgument("POVM family needs positive inputs, outputs and dimension");
  }
  elements_.assign(static_cast<std::size_t>(n_inputs) * n_outputs, SymMatrix(dim));
}

PovmFamily::PovmFamily(int n_inputs, int n_outputs, Index dim, std::vector<SymMatrix> elements)
    : PovmFamily(n_inputs, n_outputs, dim) {
  if (elements.size() != elements_.size()) {
    throw DimensionError("POVM family expects " + std::to_string(elements_.size()) +
                             " elements, got " + std::to_string(elements.size()),
                         static_cast<std::int64_t>(elements_.size()));
  }
  for (const auto& e : elements) {
    if (e.dim() != dim) {
      throw DimensionError("POVM element of dimension " + std::to_string(e.dim()) +
                               " in a family of dimension " + std::to_string(dim),
                           dim);
    }
  }
  elements_ = std::move(elements);
}

PovmFamily PovmFamily::uniform(int n_inputs, int n_outputs, Index dim) {
  PovmFamily p(n_inputs, n_outputs, dim);
  const SymMatrix e = SymMatrix::identity(dim) * (1.0 / n_outputs);
  for (auto& el : p.elements_) el = e;
  return p;
}

PovmFamily PovmFamily::rotated(const Matrix& r) const {
  if (r.rows() != dim_ || r.cols() != dim_) {
    throw DimensionError("rotation has wrong shape", dim_);
  }
  PovmFamily out = *this;
  out.tag.reset();
  for (auto& e : out.elements_) {
    e = SymMatrix::symmetrized(r.transpose() * e.dense() * r);
  }
  return out;
}

PovmReport validate_povm(const PovmFamily& p, double tol) {
  PovmReport report;
  report.tol = tol;
  report.min_eigenvalues.reserve(p.elements().size());
  report.worst_min_eigenvalue = std::numeric_limits<double>::infinity();
  const Matrix id = Matrix::Identity(p.dim(), p.dim());
  for (int x = 0; x < p.n_inputs(); ++x) {
    Matrix sum = Matrix::Zero(p.dim(), p.dim());
    for (int a = 0; a < p.n_outputs(); ++a) {
      const auto& e = p.element(x, a);
      const double lo = min_eigenvalue(e);
      report.min_eigenvalues.push_back(lo);
      report.worst_min_eigenvalue = std::min(report.worst_min_eigenvalue, lo);
      sum += e.dense();
    }
    const double res = (sum - id).norm();
    report.completeness_residuals.push_back(res);
    report.worst_completeness = std::max(report.worst_completeness, res);
  }
  report.pass = report.worst_min_eigenvalue >= -tol && report.worst_completeness <= tol;
  return report;
}

}  // namespace bellforge
