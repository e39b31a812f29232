#include "bellforge/construction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "bellforge/error.hpp"
#include "bellforge/random.hpp"

namespace bellforge {

std::string to_string(SignDistribution d) {
  return d == SignDistribution::bernoulli ? "bernoulli" : "gaussian";
}

SignDistribution parse_distribution(const std::string& s) {
  if (s == "bernoulli") return SignDistribution::bernoulli;
  if (s == "gaussian") return SignDistribution::gaussian;
  throw InvalidArgument("unknown sign distribution '" + s + "'");
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

}  // namespace

SignTensor::SignTensor(int n, std::uint64_t seed, SignDistribution dist, std::vector<double> eps)
    : n_(n), seed_(seed), dist_(dist), eps_(std::move(eps)) {
  if (n < 1) throw InvalidArgument("sign tensor needs n >= 1");
  const auto expected = static_cast<std::size_t>(n) * n * n;
  if (eps_.size() != expected) {
    throw DimensionError("sign tensor needs n^3 = " + std::to_string(expected) + " entries",
                         static_cast<std::int64_t>(expected));
  }
  if (dist == SignDistribution::bernoulli) {
    for (double e : eps_)
      if (e != 1.0 && e != -1.0) throw InvalidArgument("Bernoulli sign tensor entries must be ±1");
  }
  std::uint64_t h = kFnvOffset;
  const std::int64_t n64 = n;
  const int d = static_cast<int>(dist);
  fnv_bytes(h, &n64, sizeof n64);
  fnv_bytes(h, &seed_, sizeof seed_);
  fnv_bytes(h, &d, sizeof d);
  fnv_bytes(h, eps_.data(), eps_.size() * sizeof(double));
  fingerprint_ = h;
}

SignTensor gen_signs(int n, std::uint64_t seed, SignDistribution dist) {
  if (n < 1) throw InvalidArgument("gen_signs needs n >= 1");
  const auto count = static_cast<std::size_t>(n) * n * n;
  std::vector<double> eps(count);
  if (dist == SignDistribution::bernoulli) {
    for (std::size_t i = 0; i < count; ++i) eps[i] = (counter_draw(seed, i) >> 63) ? -1.0 : 1.0;
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      CounterRng rng(seed, 2 * i);
      eps[i] = rng.normal();
    }
  }
  return SignTensor(n, seed, dist, std::move(eps));
}

BellFunctional build_bell(const SignTensor& signs) {
  const int n = signs.n();
  BellFunctional m(Scenario{n, n + 1});
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += signs(x, a, k) * signs(y, b, k);
          m.at(x, y, a, b) = s * scale;
        }
  m.provenance = signs.fingerprint();
  return m;
}

double row_spectral_bound(const SignTensor& signs) {
  const int n = signs.n();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  double k2 = 0.0;
  Matrix r(n, n);
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) r(a, k) = signs(x, a, k) * inv_sqrt_n;
    k2 = std::max(k2, spectral_norm(r));
  }
  return k2;
}

PovmFamily build_povms(const SignTensor& signs, double k_constant) {
  const int n = signs.n();
  if (!(k_constant > 0.0)) throw InvalidArgument("POVM constant K must be positive");
  const Index d = n + 1;
  PovmFamily p(n, n + 1, d);
  const double scale = 1.0 / (n * k_constant);
  Vector u(d);
  for (int x = 0; x < n; ++x) {
    Matrix rest = Matrix::Identity(d, d);
    for (int a = 0; a < n; ++a) {
      u(0) = 1.0;
      for (int k = 0; k < n; ++k) u(k + 1) = signs(x, a, k);
      const Matrix e = scale * (u * u.transpose());
      p.element(x, a) = SymMatrix::symmetrized(e);
      rest -= e;
    }
    SymMatrix last = SymMatrix::symmetrized(rest);
    const double lo = min_eigenvalue(last);
    if (lo < -1e-10) {
      throw InvalidPovm("K = " + std::to_string(k_constant) +
                            " is below the validity threshold: completing element for input " +
                            std::to_string(x) + " has eigenvalue " + std::to_string(lo),
                        lo);
    }
    p.element(x, n) = std::move(last);
  }
  p.tag = ConstructionTag{signs.fingerprint(), k_constant};
  return p;
}

QuantumTerms explicit_quantum_value(const SignTensor& signs, const BellFunctional& m,
                                    const PovmFamily& povm, const SchmidtState& state) {
  const int n = signs.n();
  if (!m.provenance || *m.provenance != signs.fingerprint()) {
    throw ProvenanceMismatch("Bell functional was not built from this sign tensor");
  }
  if (!povm.tag || povm.tag->fingerprint != signs.fingerprint()) {
    throw ProvenanceMismatch("POVM family was not built from this sign tensor");
  }
  if (state.dim() != n + 1) {
    throw DimensionError("state dimension must be n + 1 = " + std::to_string(n + 1), n + 1);
  }
  const double kc = povm.tag->k_constant;
  const double n4 = std::pow(static_cast<double>(n), 4);
  const double norm = 1.0 / (kc * kc * n4);

  // Rows (x, a) of the sign tensor as an n² × n matrix.
  Matrix e(static_cast<Index>(n) * n, n);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) e(static_cast<Index>(x) * n + a, k) = signs(x, a, k);

  const double a1 = state[0];
  Vector tail(n);
  for (int i = 0; i < n; ++i) tail(i) = state[static_cast<std::size_t>(i) + 1];

  // S0(k) = Σ ε^k, S(k,p) = Σ ε^k ε^p, T_k(p,q) = Σ ε^k ε^p ε^q over (x, a).
  const Vector s0 = e.colwise().sum().transpose();
  const Matrix s = e.transpose() * e;

  QuantumTerms t;
  t.term_i = a1 * a1 * norm * s0.squaredNorm();
  // Σ_{i≥2} α_i Σ_k S(k, i−1)² = Σ_p tail(p) · ‖S(:,p)‖².
  t.term_ii = 2.0 * a1 * norm * tail.dot(s.colwise().squaredNorm().transpose());
  double iii = 0.0;
  const Matrix ttail = tail * tail.transpose();
  for (int k = 0; k < n; ++k) {
    const Matrix tk = e.transpose() * e.col(k).asDiagonal() * e;
    iii += ttail.cwiseProduct(tk.cwiseProduct(tk)).sum();
  }
  t.term_iii = norm * iii;
  t.total = t.term_i + t.term_ii + t.term_iii;
  t.term_ii_bound = 2.0 / (kc * kc) * a1 * tail.sum();
  return t;
}

ConstructionReport construct_report(int n, std::uint64_t seed, double alpha_top,
                                    const ConstructOptions& opt) {
  ConstructionReport rep;
  rep.n = n;
  rep.seed = seed;
  rep.distribution = opt.distribution;
  rep.alpha_top = alpha_top;

  for (int attempt = 0; attempt <= opt.retry_cap; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    const SignTensor signs = gen_signs(n, s, opt.distribution);
    const double k2 = row_spectral_bound(signs);
    const double kc = 2.0 * k2 * k2;
    PovmFamily povm;
    try {
      povm = build_povms(signs, kc);
    } catch (const InvalidPovm&) {
      continue;
    }
    const auto check = validate_povm(povm, 1e-9);
    if (!check.pass) continue;

    rep.seed_used = s;
    rep.retries = attempt;
    rep.k2 = k2;
    rep.k_constant = kc;
    rep.povm_min_eigenvalue = check.worst_min_eigenvalue;
    rep.povm_completeness = check.worst_completeness;

    const BellFunctional m = build_bell(signs);
    const SchmidtState state = build_state(profile::TwoLevel{alpha_top, n});
    rep.alphas.assign(state.alphas().begin(), state.alphas().end());
    rep.terms = explicit_quantum_value(signs, m, povm, state);
    rep.quantum_lb = rep.terms.total;

    const ClassicalOptions copt{opt.classical_budget, opt.jobs};
    if (classical_exact_cost(m.scenario()) <= opt.classical_budget) {
      rep.classical = classical_value_exact(m, copt);
      rep.classical_method = "exact";
    } else {
      rep.classical = classical_value_local(m, opt.local_restarts, derive_seed(s, 0xC1A55));
      rep.classical_method = "local";
    }
    if (opt.epsilon_norm && epsilon_norm_cost(m.scenario()) <= opt.classical_budget) {
      rep.epsilon_norm = epsilon_norm_exact(m, copt);
    }
    rep.ratio = rep.classical.value > 1e-15 ? rep.quantum_lb / rep.classical.value : 0.0;
    rep.accepted = true;
    return rep;
  }
  throw Error("construction retry cap exhausted after " + std::to_string(opt.retry_cap + 1) +
              " draws for n = " + std::to_string(n));
}

}  // namespace bellforge
