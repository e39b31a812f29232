#include "bellforge/sdp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

#include "bellforge/construction.hpp"
#include "bellforge/error.hpp"

namespace bellforge {

void SparseSym::add(Index i, Index j, double v) {
  if (i > j) std::swap(i, j);
  for (auto& e : entries_) {
    if (e.i == i && e.j == j) {
      e.v += v;
      return;
    }
  }
  entries_.push_back({i, j, v});
}

double SparseSym::dot(const Matrix& g) const {
  double s = 0.0;
  for (const auto& e : entries_) s += (e.i == e.j ? 1.0 : 2.0) * e.v * g(e.i, e.j);
  return s;
}

void SparseSym::axpy(double s, Matrix& g) const {
  for (const auto& e : entries_) {
    g(e.i, e.j) += s * e.v;
    if (e.i != e.j) g(e.j, e.i) += s * e.v;
  }
}

Matrix SparseSym::dense(Index m) const {
  Matrix g = Matrix::Zero(m, m);
  axpy(1.0, g);
  return g;
}

double SparseSym::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += (e.i == e.j ? 1.0 : 2.0) * e.v * e.v;
  return std::sqrt(s);
}

GramProblem build_op_gram(const BellFunctional& m, Sense sense) {
  const auto& sc = m.scenario();
  const GramLayout lay{sc.n_inputs, sc.n_outputs};
  GramProblem p;
  p.m = lay.size();
  p.sense = sense;
  for (int x = 0; x < sc.n_inputs; ++x)
    for (int y = 0; y < sc.n_inputs; ++y)
      for (int a = 0; a < sc.n_outputs; ++a)
        for (int b = 0; b < sc.n_outputs; ++b) {
          const double c = m(x, y, a, b);
          if (c != 0.0) p.objective.add(lay.u(x, a), lay.v(y, b), 0.5 * c);
        }

  EqConstraint norm_z;
  norm_z.a.add(lay.z(), lay.z(), 1.0);
  norm_z.b = 1.0;
  p.constraints.push_back(std::move(norm_z));

  auto add_party = [&](auto index_of) {
    for (int x = 0; x < sc.n_inputs; ++x) {
      for (int a = 0; a < sc.n_outputs; ++a)
        for (int a2 = a + 1; a2 < sc.n_outputs; ++a2) {
          EqConstraint ortho;
          ortho.a.add(index_of(x, a), index_of(x, a2), 0.5);
          p.constraints.push_back(std::move(ortho));
        }
      EqConstraint overlap;
      EqConstraint mass;
      for (int a = 0; a < sc.n_outputs; ++a) {
        overlap.a.add(index_of(x, a), lay.z(), 0.5);
        mass.a.add(index_of(x, a), index_of(x, a), 1.0);
      }
      overlap.b = 1.0;
      mass.b = 1.0;
      p.constraints.push_back(std::move(overlap));
      p.constraints.push_back(std::move(mass));
    }
  };
  add_party([&](int x, int a) { return lay.u(x, a); });
  add_party([&](int y, int b) { return lay.v(y, b); });

  Matrix w = Matrix::Zero(p.m, 2 * static_cast<Index>(sc.n_inputs));
  for (int x = 0; x < sc.n_inputs; ++x) {
    w(lay.z(), x) = 1.0;
    w(lay.z(), sc.n_inputs + x) = 1.0;
    for (int a = 0; a < sc.n_outputs; ++a) {
      w(lay.u(x, a), x) = -1.0;
      w(lay.v(x, a), sc.n_inputs + x) = -1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w * w.transpose());
  Index keep = 0;
  while (keep < p.m && eig.eigenvalues()(keep) < 1e-9) ++keep;
  p.face = eig.eigenvectors().leftCols(keep);
  return p;
}

namespace {

/// Constraint operator on the reduced variable H (X = Q H Qᵀ):
/// A(H)_k = ⟨Qᵀ A_k Q, H⟩ / ‖Qᵀ A_k Q‖, plus the pseudo-inverse of A A*.
struct ConstraintOp {
  std::vector<SparseSym> rows;
  std::vector<double> row_scale;
  Vector b;
  Matrix q;  // empty: identity
  Matrix aat_pinv;

  Matrix lift(const Matrix& h) const { return q.size() == 0 ? h : Matrix(q * h * q.transpose()); }
  Matrix reduce(const Matrix& g) const { return q.size() == 0 ? g : Matrix(q.transpose() * g * q); }

  Vector apply(const Matrix& h) const {
    const Matrix x = lift(h);
    Vector out(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
      out(static_cast<Index>(k)) = rows[k].dot(x) / row_scale[k];
    return out;
  }
  Matrix adjoint(const Vector& y, Index m) const {
    Matrix g = Matrix::Zero(m, m);
    for (std::size_t k = 0; k < rows.size(); ++k)
      rows[k].axpy(y(static_cast<Index>(k)) / row_scale[k], g);
    return reduce(g);
  }
};

ConstraintOp make_constraint_op(const GramProblem& p) {
  ConstraintOp op;
  op.q = p.face;
  const Index r = op.q.size() == 0 ? p.m : op.q.cols();
  std::vector<double> bs;
  std::vector<Vector> reduced;
  for (const auto& c : p.constraints) {
    double nrm = 0.0;
    Vector flat;
    if (op.q.size() == 0) {
      nrm = c.a.frobenius_norm();
    } else {
      const Matrix ar = op.reduce(c.a.dense(p.m));
      nrm = ar.norm();
      flat = Eigen::Map<const Vector>(ar.data(), ar.size());
    }
    if (nrm <= 1e-12) {
      if (std::abs(c.b) > 1e-12) throw InvalidArgument("SDP has an empty constraint with nonzero right side");
      continue;
    }
    op.rows.push_back(c.a);
    op.row_scale.push_back(nrm);
    bs.push_back(c.b / nrm);
    if (op.q.size() != 0) reduced.push_back(flat / nrm);
  }
  op.b = Eigen::Map<const Vector>(bs.data(), static_cast<Index>(bs.size()));

  const Index nrows = static_cast<Index>(op.rows.size());
  Matrix aat = Matrix::Zero(nrows, nrows);
  if (op.q.size() == 0) {
    // ⟨A_k, A_l⟩ accumulated per matrix position.
    std::unordered_map<std::int64_t, std::vector<std::pair<Index, double>>> by_pos;
    for (Index k = 0; k < nrows; ++k) {
      const double sc = op.row_scale[static_cast<std::size_t>(k)];
      for (const auto& e : op.rows[static_cast<std::size_t>(k)].entries())
        by_pos[static_cast<std::int64_t>(e.i) * p.m + e.j].emplace_back(
            k, e.v / sc * (e.i == e.j ? 1.0 : std::sqrt(2.0)));
    }
    for (const auto& [pos, list] : by_pos)
      for (const auto& [k, vk] : list)
        for (const auto& [l, vl] : list) aat(k, l) += vk * vl;
  } else {
    Matrix flat(r * r, nrows);
    for (Index k = 0; k < nrows; ++k) flat.col(k) = reduced[static_cast<std::size_t>(k)];
    aat = flat.transpose() * flat;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(aat);
  const Vector& ev = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Vector inv = ev;
  for (Index i = 0; i < inv.size(); ++i) inv(i) = ev(i) > cutoff ? 1.0 / ev(i) : 0.0;
  op.aat_pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  return op;
}

}  // namespace

SdpSolution solve_sdp(const GramProblem& p, const SdpSettings& settings, const SdpWarmStart* warm) {
  if (p.m < 1) throw InvalidArgument("SDP needs a positive matrix size");
  if (p.face.size() != 0 && p.face.rows() != p.m) {
    throw DimensionError("face basis must have m rows", p.m);
  }
  const Index m = p.m;
  const ConstraintOp op = make_constraint_op(p);
  const Index r = p.face.size() == 0 ? m : p.face.cols();

  // Internally: minimize ⟨C, H⟩ with C = ±Qᵀ Obj Q scaled to unit norm.
  const double sense_sign = p.sense == Sense::maximize ? -1.0 : 1.0;
  Matrix c = sense_sign * op.reduce(p.objective.dense(m));
  const double c_norm = c.norm();
  const double c_scale = c_norm > 0.0 ? c_norm : 1.0;
  c /= c_scale;
  const double b_norm = op.b.norm();

  Matrix x = Matrix::Zero(r, r);
  if (warm != nullptr && warm->x.rows() == m && warm->x.cols() == m) {
    x = op.reduce(warm->x);
  }
  Matrix s = Matrix::Zero(r, r);
  Vector y = Vector::Zero(op.b.size());
  double mu = settings.penalty;

  SdpSolution sol;
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  int iter = 0;
  double pres = 0.0;
  double dres = 0.0;
  double gap = 0.0;
  for (iter = 1; iter <= settings.max_iter; ++iter) {
    const Vector rhs = mu * (op.b - op.apply(x)) + op.apply(c - s);
    y = op.aat_pinv * rhs;
    const Matrix aty = op.adjoint(y, m);
    const Matrix v = c - aty - mu * x;
    eig.compute(0.5 * (v + v.transpose()));
    const Vector& lam = eig.eigenvalues();
    const Matrix& q = eig.eigenvectors();
    s = q * lam.cwiseMax(0.0).asDiagonal() * q.transpose();
    x = q * ((-lam).cwiseMax(0.0) / mu).asDiagonal() * q.transpose();

    pres = (op.apply(x) - op.b).norm() / (1.0 + b_norm);
    dres = (c - aty - s).norm() / 2.0;
    const double pobj = c.cwiseProduct(x).sum();
    const double dobj = op.b.dot(y);
    gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (pres <= settings.tol && dres <= settings.tol && gap <= settings.tol) {
      sol.converged = true;
      break;
    }
    if (settings.adapt_penalty && iter % 10 == 0) {
      if (pres > 10.0 * dres) {
        mu = std::min(mu * 2.0, 1e6);
      } else if (dres > 10.0 * pres) {
        mu = std::max(mu / 2.0, 1e-6);
      }
    }
  }
  sol.iterations = std::min(iter, settings.max_iter);
  sol.gram = SymMatrix::symmetrized(op.lift(x));
  sol.value = p.objective.dot(sol.gram.dense());
  sol.dual_value = -sense_sign * c_scale * op.b.dot(y);
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.gap = gap;
  return sol;
}

OmegaResult omega_op(const BellFunctional& m, const SdpSettings& settings) {
  OmegaResult r;
  r.max_solution = solve_sdp(build_op_gram(m, Sense::maximize), settings);
  r.min_solution = solve_sdp(build_op_gram(m, Sense::minimize), settings);
  r.max_value = r.max_solution.value;
  r.min_value = r.min_solution.value;
  r.value = std::max(std::abs(r.max_value), std::abs(r.min_value));
  r.converged = r.max_solution.converged && r.min_solution.converged;
  return r;
}

namespace {

double max_signed_sum_norm(const std::vector<const Vector*>& w) {
  if (w.empty()) return 0.0;
  Vector sum = Vector::Zero(w[0]->size());
  for (const auto* v : w) sum += *v;
  double best = sum.squaredNorm();
  std::vector<double> sign(w.size(), 1.0);
  // Gray code over the signs of w[1..]; w[0] stays positive (s and −s agree).
  const std::uint64_t count = std::uint64_t{1} << (w.size() - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    const std::size_t j = static_cast<std::size_t>(std::countr_zero(i)) + 1;
    sign[j] = -sign[j];
    sum += 2.0 * sign[j] * *w[j];
    best = std::max(best, sum.squaredNorm());
  }
  return std::sqrt(best);
}

std::vector<std::vector<const Vector*>> nonzero_by_input(const std::vector<Vector>& w, int n_inputs,
                                                         int n_outputs) {
  std::vector<std::vector<const Vector*>> out(static_cast<std::size_t>(n_inputs));
  for (int x = 0; x < n_inputs; ++x)
    for (int a = 0; a < n_outputs; ++a) {
      const Vector& v = w[static_cast<std::size_t>(x) * n_outputs + a];
      if (v.squaredNorm() > 0.0) out[static_cast<std::size_t>(x)].push_back(&v);
    }
  return out;
}

}  // namespace

double vector_map_norm(const std::vector<Vector>& w, int n_inputs, int n_outputs) {
  if (w.size() != static_cast<std::size_t>(n_inputs) * n_outputs) {
    throw DimensionError("vector family size does not match the scenario",
                         static_cast<std::int64_t>(n_inputs) * n_outputs);
  }
  double best = 0.0;
  for (const auto& list : nonzero_by_input(w, n_inputs, n_outputs)) {
    best = std::max(best, max_signed_sum_norm(list));
  }
  return best;
}

CertificateResult vector_certificate_value(const BellFunctional& m, const VectorStrategy& vs,
                                           double budget) {
  const auto& sc = m.scenario();
  if (vs.n_inputs != sc.n_inputs || vs.n_outputs != sc.n_outputs) {
    throw ScenarioMismatch("vector strategy scenario differs from the functional");
  }
  std::size_t widest = 0;
  for (const auto* fam : {&vs.u, &vs.v})
    for (const auto& list : nonzero_by_input(*fam, vs.n_inputs, vs.n_outputs))
      widest = std::max(widest, list.size());
  const double cost = std::ldexp(1.0, static_cast<int>(widest) - 1) * sc.n_inputs;
  if (widest > 0 && cost > budget) {
    throw BudgetExceeded("certificate map norm needs " + std::to_string(cost) +
                             " sign patterns, budget is " + std::to_string(budget),
                         cost, budget);
  }
  CertificateResult r;
  r.u_norm = vector_map_norm(vs.u, vs.n_inputs, vs.n_outputs);
  r.v_norm = vector_map_norm(vs.v, vs.n_inputs, vs.n_outputs);
  if (!(r.u_norm > 0.0) || !(r.v_norm > 0.0)) {
    throw InvalidArgument("certificate vectors have zero map norm");
  }
  for (int x = 0; x < sc.n_inputs; ++x)
    for (int y = 0; y < sc.n_inputs; ++y)
      for (int a = 0; a < sc.n_outputs; ++a)
        for (int b = 0; b < sc.n_outputs; ++b) {
          const double c = m(x, y, a, b);
          if (c != 0.0) r.pairing += c * vs.u_at(x, a).dot(vs.v_at(y, b));
        }
  r.value = std::abs(r.pairing) / (r.u_norm * r.v_norm);
  return r;
}

VectorStrategy sign_row_vectors(const SignTensor& signs) {
  const int n = signs.n();
  VectorStrategy vs;
  vs.n_inputs = n;
  vs.n_outputs = n + 1;
  vs.dim = n;
  vs.u.assign(static_cast<std::size_t>(n) * (n + 1), Vector::Zero(n));
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < n; ++a) {
      Vector& u = vs.u[static_cast<std::size_t>(x) * (n + 1) + a];
      for (int p = 0; p < n; ++p) u(p) = signs(x, a, p);
    }
  vs.v = vs.u;
  return vs;
}

}  // namespace bellforge
