#include "bellforge/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include "bellforge/error.hpp"
#include "bellforge/quantum.hpp"

namespace bellforge {

double entropy_of_entanglement(const SchmidtState& state) {
  double e = 0.0;
  for (double a : state.alphas()) {
    const double p = a * a;
    if (p > 0.0) e -= p * std::log2(p);
  }
  return e;
}

double f_alpha(int n, double alpha) {
  if (n < 1) throw InvalidArgument("f_alpha needs n >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("f_alpha needs alpha in [0, 1]");
  const double a2 = alpha * alpha;
  const double rest = 1.0 - a2;
  double f = 0.0;
  if (a2 > 0.0) f += a2 * std::log2(1.0 / a2);
  if (rest > 0.0) f += rest * std::log2(n / rest);
  return f;
}

std::string DeltaClass::label() const {
  if (max_entangled && non_entangled) return "both";
  if (max_entangled) return "delta_max_entangled";
  if (non_entangled) return "delta_non_entangled";
  return "neither";
}

DeltaClass delta_classify(const SchmidtState& state, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  DeltaClass c;
  c.entropy = entropy_of_entanglement(state);
  c.gap = std::log2(static_cast<double>(state.dim())) - c.entropy;
  c.max_entangled = c.gap < delta;
  c.non_entangled = c.entropy < delta;
  return c;
}

double iviol(const SchmidtState& state) {
  double sum = 0.0;
  for (double a : state.alphas()) sum += a;
  return state[0] * sum;
}

double DyadicDecomposition::beta_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.beta;
  return s;
}

Vector DyadicDecomposition::reconstruct() const {
  Vector v = Vector::Zero(source_dim);
  for (const auto& t : terms) {
    const double w = t.beta / std::sqrt(static_cast<double>(t.indices.size()));
    for (Index i : t.indices) v(i) += w;
  }
  return v;
}

int dyadic_block(Index i) {
  return std::bit_width(static_cast<std::uint64_t>(i) + 1) - 1;
}

double dyadic_beta_bound(Index n) {
  if (n <= 1) return 1.0;
  return 2.0 * std::sqrt(std::log2(static_cast<double>(n)));
}

DyadicDecomposition dyadic_decompose(const std::vector<double>& coeffs) {
  const Index n = static_cast<Index>(coeffs.size());
  if (n == 0) throw InvalidArgument("dyadic_decompose needs a nonempty vector");
  double norm2 = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double a = coeffs[static_cast<std::size_t>(i)];
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("coefficient " + std::to_string(i) + " is negative or not finite");
    }
    if (i > 0 && a > coeffs[static_cast<std::size_t>(i) - 1]) {
      throw InvalidArgument("coefficients are not nonincreasing at index " + std::to_string(i));
    }
    norm2 += a * a;
  }
  if (norm2 > 1.0 + 1e-12) throw InvalidArgument("coefficient vector has norm above 1");

  DyadicDecomposition d;
  d.source_dim = n;
  for (Index start = 0; start < n; start = 2 * start + 1) {
    const Index end = std::min(n, 2 * start + 1);  // exclusive
    for (Index j = start; j < end; ++j) {
      const double t = coeffs[static_cast<std::size_t>(j)];
      const double next = j + 1 < end ? coeffs[static_cast<std::size_t>(j) + 1] : 0.0;
      const double step = t - next;
      if (step <= 0.0) continue;
      DyadicTerm term;
      for (Index i = start; i <= j; ++i) term.indices.push_back(i);
      term.beta = step * std::sqrt(static_cast<double>(term.indices.size()));
      d.terms.push_back(std::move(term));
    }
  }
  return d;
}

namespace {

double log_factor(Index d) { return d <= 1 ? 1.0 : std::log2(static_cast<double>(d)); }

/// ⟨φ_A| B |φ_B⟩ for uniform block states φ_S = |S|^{-1/2} Σ_{i∈S} |ii⟩.
double block_pair(const Matrix& w, const std::vector<Index>& a, const std::vector<Index>& b) {
  double s = 0.0;
  for (Index i : a)
    for (Index j : b) s += w(i, j);
  return s / std::sqrt(static_cast<double>(a.size() * b.size()));
}

struct Prepared {
  Matrix diag_block;  // W(i,j) = B[(i,i),(j,j)]
  DyadicDecomposition dec;
  double c_value = 0.0;
  Index d = 0;
};

Prepared prepare(const SymMatrix& b, const SchmidtState& state) {
  Prepared p;
  p.d = state.dim();
  if (b.dim() != p.d * p.d) {
    throw DimensionError("Bell operator dimension is not the square of the state dimension",
                         p.d * p.d);
  }
  p.diag_block.resize(p.d, p.d);
  for (Index i = 0; i < p.d; ++i)
    for (Index j = 0; j < p.d; ++j) p.diag_block(i, j) = b(i * p.d + i, j * p.d + j);
  const Vector alpha = state.as_vector();
  p.c_value = alpha.dot(p.diag_block * alpha);
  std::vector<double> a(state.alphas().begin(), state.alphas().end());
  // Normalization round-off can push the norm a hair above one.
  double norm2 = 0.0;
  for (double v : a) norm2 += v * v;
  if (norm2 > 1.0) {
    for (double& v : a) v /= std::sqrt(norm2);
  }
  p.dec = dyadic_decompose(a);
  return p;
}

}  // namespace

ExtractionResult extract_max_entangled(const BellFunctional& m, const PovmFamily& alice,
                                       const PovmFamily& bob, const SchmidtState& state) {
  const SymMatrix b = bell_operator(m, alice, bob);
  const double lo = min_eigenvalue(b);
  if (lo < -1e-8) {
    throw PositivityError("Bell operator is not positive semidefinite (min eigenvalue " +
                              std::to_string(lo) + ")",
                          lo);
  }
  const Prepared p = prepare(b, state);
  if (!(p.c_value > 0.0)) throw InvalidArgument("state value <psi|B|psi> must be positive");

  ExtractionResult r;
  r.c_value = p.c_value;
  r.guarantee = p.c_value / (4.0 * log_factor(p.d));
  r.beta_sum = p.dec.beta_sum();
  const auto& terms = p.dec.terms;
  r.best_cross = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i; j < terms.size(); ++j) {
      const double v = block_pair(p.diag_block, terms[i].indices, terms[j].indices);
      if (v > r.best_cross) {
        r.best_cross = v;
        r.term_p = static_cast<int>(i);
        r.term_q = static_cast<int>(j);
      }
    }
  const auto& tp = terms[static_cast<std::size_t>(r.term_p)].indices;
  const auto& tq = terms[static_cast<std::size_t>(r.term_q)].indices;
  const double vp = block_pair(p.diag_block, tp, tp);
  const double vq = block_pair(p.diag_block, tq, tq);
  r.support = vp >= vq ? tp : tq;
  r.value = std::max(vp, vq);
  r.block_dim = static_cast<Index>(r.support.size());
  r.coefficients.assign(r.support.size(), 1.0 / std::sqrt(static_cast<double>(r.support.size())));
  return r;
}

PolarizationResult polarization_select(const BellFunctional& m, const PovmFamily& alice,
                                       const PovmFamily& bob, const SchmidtState& state) {
  const SymMatrix b = bell_operator(m, alice, bob);
  const Prepared p = prepare(b, state);
  PolarizationResult r;
  r.c_value = std::abs(p.c_value);
  r.guarantee = r.c_value / (16.0 * log_factor(p.d));
  const auto& terms = p.dec.terms;
  std::size_t bi = 0;
  std::size_t bj = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i; j < terms.size(); ++j) {
      const double v = std::abs(block_pair(p.diag_block, terms[i].indices, terms[j].indices));
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  const auto& ta = terms[bi].indices;
  const auto& tb = terms[bj].indices;
  const double aa = block_pair(p.diag_block, ta, ta);
  const double bb = block_pair(p.diag_block, tb, tb);
  const double x = block_pair(p.diag_block, ta, tb);
  // ⟨ξ|B|ξ⟩ = aa + bb + 2 Re(i^k) x for real symmetric B.
  const std::complex<double> unit(0.0, 1.0);
  std::complex<double> phase(1.0, 0.0);
  for (int k = 0; k < 4; ++k) {
    r.phase_values.push_back(aa + bb + 2.0 * phase.real() * x);
    phase *= unit;
  }
  for (int k = 1; k < 4; ++k) {
    if (std::abs(r.phase_values[k]) > std::abs(r.phase_values[r.phase])) r.phase = k;
  }
  r.value = r.phase_values[static_cast<std::size_t>(r.phase)];
  r.support_p = ta;
  r.support_q = tb;
  return r;
}

}  // namespace bellforge
