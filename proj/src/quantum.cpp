#include "bellforge/quantum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "bellforge/error.hpp"
#include "bellforge/random.hpp"

namespace bellforge {

namespace {

void check_families(const BellFunctional& m, const PovmFamily& alice, const PovmFamily& bob) {
  const auto& s = m.scenario();
  for (const auto* p : {&alice, &bob}) {
    if (p->n_inputs() != s.n_inputs || p->n_outputs() != s.n_outputs) {
      throw ScenarioMismatch("POVM family scenario differs from the functional");
    }
  }
}

/// Σ_{y,b} M(x,y,a,b) X_y^b for Alice (or Σ_{x,a} M(x,y,a,b) X_x^a for Bob).
Matrix weighted_other(const BellFunctional& m, const PovmFamily& other, Party party, int input,
                      int out) {
  const auto& s = m.scenario();
  Matrix acc = Matrix::Zero(other.dim(), other.dim());
  for (int j = 0; j < s.n_inputs; ++j)
    for (int o = 0; o < s.n_outputs; ++o) {
      const double c = party == Party::alice ? m(input, j, out, o) : m(j, input, o, out);
      if (c != 0.0) acc += c * other.element(j, o).dense();
    }
  return acc;
}

double costs_value(const std::vector<SymMatrix>& e, const std::vector<SymMatrix>& c) {
  double v = 0.0;
  for (std::size_t a = 0; a < e.size(); ++a) v += inner(e[a], c[a]);
  return v;
}

/// PSD clip, then E_a -> S^{-1/2} E_a S^{-1/2} with S = Σ_a E_a.
std::vector<SymMatrix> polish(std::vector<SymMatrix> e) {
  const Index d = e.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (auto& el : e) {
    el = psd_project(el);
    sum += el.dense();
  }
  const Matrix r = inverse_sqrt(SymMatrix::symmetrized(sum), 1e-12);
  for (auto& el : e) el = SymMatrix::symmetrized(r * el.dense() * r);
  return e;
}

BestResponse two_outcome(const std::vector<SymMatrix>& c) {
  const Index d = c[0].dim();
  const auto eig = herm_eig(c[0] - c[1]);
  Matrix proj = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if (eig.values(i) > 0.0) proj += eig.vectors.col(i) * eig.vectors.col(i).transpose();
  }
  BestResponse r;
  r.method = BestResponseMethod::two_outcome_spectral;
  r.elements = {SymMatrix::symmetrized(proj), SymMatrix::symmetrized(Matrix::Identity(d, d) - proj)};
  r.value = costs_value(r.elements, c);
  return r;
}

std::optional<BestResponse> via_sdp(const std::vector<SymMatrix>& c, const SdpSettings& settings) {
  const int k = static_cast<int>(c.size());
  const Index d = c[0].dim();
  GramProblem p;
  p.m = k * d;
  p.sense = Sense::maximize;
  for (int a = 0; a < k; ++a)
    for (Index i = 0; i < d; ++i)
      for (Index j = i; j < d; ++j) {
        const double v = c[static_cast<std::size_t>(a)](i, j);
        if (v != 0.0) p.objective.add(a * d + i, a * d + j, v);
      }
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) {
      EqConstraint eq;
      for (int a = 0; a < k; ++a) eq.a.add(a * d + i, a * d + j, i == j ? 1.0 : 0.5);
      eq.b = i == j ? 1.0 : 0.0;
      p.constraints.push_back(std::move(eq));
    }
  const SdpSolution sol = solve_sdp(p, settings);
  if (!sol.converged) return std::nullopt;
  std::vector<SymMatrix> e;
  e.reserve(c.size());
  for (int a = 0; a < k; ++a) {
    e.push_back(SymMatrix::symmetrized(sol.gram.dense().block(a * d, a * d, d, d)));
  }
  BestResponse r;
  r.method = BestResponseMethod::sdp;
  r.elements = polish(std::move(e));
  r.value = costs_value(r.elements, c);
  return r;
}

/// Dykstra alternation between the product PSD cone and {Σ_a E_a = I}.
std::vector<Matrix> project_povm_set(std::vector<Matrix> x, int max_iter = 200) {
  const std::size_t k = x.size();
  const Index d = x[0].rows();
  std::vector<Matrix> p(k, Matrix::Zero(d, d));
  std::vector<Matrix> q(k, Matrix::Zero(d, d));
  for (int it = 0; it < max_iter; ++it) {
    std::vector<Matrix> y(k);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t a = 0; a < k; ++a) {
      y[a] = x[a] + p[a];
      sum += y[a];
    }
    const Matrix shift = (Matrix::Identity(d, d) - sum) / static_cast<double>(k);
    double change = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const Matrix ya = y[a] + shift;
      p[a] = y[a] - ya;
      const Matrix next = psd_project(SymMatrix::symmetrized(ya + q[a])).dense();
      q[a] = ya + q[a] - next;
      change += (next - x[a]).squaredNorm();
      x[a] = next;
    }
    if (change < 1e-26) break;
  }
  return x;
}

}  // namespace

std::string to_string(BestResponseMethod m) {
  switch (m) {
    case BestResponseMethod::forced: return "forced";
    case BestResponseMethod::two_outcome_spectral: return "two_outcome_spectral";
    case BestResponseMethod::sdp: return "sdp";
    case BestResponseMethod::projected_gradient: return "projected_gradient";
  }
  return "unknown";
}

SymMatrix bell_operator(const BellFunctional& m, const PovmFamily& alice, const PovmFamily& bob) {
  check_families(m, alice, bob);
  const auto& s = m.scenario();
  const Index da = alice.dim();
  const Index db = bob.dim();
  Matrix out = Matrix::Zero(da * db, da * db);
  for (int x = 0; x < s.n_inputs; ++x)
    for (int a = 0; a < s.n_outputs; ++a) {
      const Matrix f = weighted_other(m, bob, Party::alice, x, a);
      if (f.isZero(0.0)) continue;
      const Matrix& e = alice.element(x, a).dense();
      for (Index i = 0; i < da; ++i)
        for (Index j = 0; j < da; ++j) {
          if (e(i, j) != 0.0) out.block(i * db, j * db, db, db) += e(i, j) * f;
        }
    }
  return SymMatrix::symmetrized(out);
}

std::vector<SymMatrix> response_costs(const BellFunctional& m, const PovmFamily& other,
                                      const SchmidtState& state, Party party, int input) {
  const auto& s = m.scenario();
  if (other.n_inputs() != s.n_inputs || other.n_outputs() != s.n_outputs) {
    throw ScenarioMismatch("POVM family scenario differs from the functional");
  }
  if (other.dim() != state.dim()) {
    throw DimensionError("POVM dimension differs from the state dimension", state.dim());
  }
  if (input < 0 || input >= s.n_inputs) throw InvalidArgument("input index out of range");
  const Vector alpha = state.as_vector();
  std::vector<SymMatrix> costs;
  costs.reserve(static_cast<std::size_t>(s.n_outputs));
  for (int a = 0; a < s.n_outputs; ++a) {
    const Matrix w = weighted_other(m, other, party, input, a);
    costs.push_back(SymMatrix::symmetrized(alpha.asDiagonal() * w * alpha.asDiagonal()));
  }
  return costs;
}

double quantum_value(const BellFunctional& m, const PovmFamily& alice, const PovmFamily& bob,
                     const SchmidtState& state) {
  check_families(m, alice, bob);
  if (alice.dim() != state.dim()) {
    throw DimensionError("POVM dimension differs from the state dimension", state.dim());
  }
  double v = 0.0;
  for (int x = 0; x < m.scenario().n_inputs; ++x) {
    const auto c = response_costs(m, bob, state, Party::alice, x);
    for (int a = 0; a < m.scenario().n_outputs; ++a) v += inner(alice.element(x, a), c[a]);
  }
  return v;
}

BestResponse best_response_projected_gradient(const std::vector<SymMatrix>& costs, int max_iter,
                                               double tol) {
  const std::size_t k = costs.size();
  const Index d = costs[0].dim();
  double scale = 0.0;
  for (const auto& c : costs) scale = std::max(scale, spectral_norm(c.dense()));
  BestResponse r;
  r.method = BestResponseMethod::projected_gradient;
  std::vector<Matrix> e(k, Matrix::Identity(d, d) / static_cast<double>(k));
  if (scale == 0.0) {
    for (const auto& el : e) r.elements.push_back(SymMatrix::symmetrized(el));
    return r;
  }
  const double step = 1.0 / scale;
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t a = 0; a < k; ++a) e[a] += step * costs[a].dense();
    e = project_povm_set(std::move(e));
    double v = 0.0;
    for (std::size_t a = 0; a < k; ++a) v += costs[a].dense().cwiseProduct(e[a]).sum();
    if (std::abs(v - prev) < tol) break;
    prev = v;
  }
  std::vector<SymMatrix> out;
  for (const auto& el : e) out.push_back(SymMatrix::symmetrized(el));
  r.elements = polish(std::move(out));
  r.value = costs_value(r.elements, costs);
  return r;
}

BestResponse best_response_for_costs(const std::vector<SymMatrix>& costs,
                                     const std::vector<SymMatrix>* incumbent,
                                     const SdpSettings& settings) {
  if (costs.empty()) throw InvalidArgument("best response needs at least one outcome");
  const Index d = costs[0].dim();
  for (const auto& c : costs) {
    if (c.dim() != d) throw DimensionError("cost matrices differ in dimension", d);
  }
  BestResponse r;
  if (costs.size() == 1) {
    r.method = BestResponseMethod::forced;
    r.elements = {SymMatrix::identity(d)};
    r.value = costs[0].trace();
    return r;
  }
  if (costs.size() == 2) {
    r = two_outcome(costs);
  } else if (auto s = via_sdp(costs, settings)) {
    r = std::move(*s);
  } else {
    r = best_response_projected_gradient(costs);
  }
  if (incumbent != nullptr && incumbent->size() == costs.size()) {
    const double inc = costs_value(*incumbent, costs);
    if (!(r.value > inc)) {
      r.elements = *incumbent;
      r.value = inc;
      r.kept_incumbent = true;
    }
  }
  return r;
}

BestResponse povm_best_response(const BellFunctional& m, const PovmFamily& other,
                                const SchmidtState& state, Party party, int input,
                                const std::vector<SymMatrix>* incumbent,
                                const SdpSettings& settings) {
  return best_response_for_costs(response_costs(m, other, state, party, input), incumbent,
                                 settings);
}

void SeesawConfig::validate() const {
  if (dim < 1) throw InvalidArgument("see-saw dimension must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("see-saw tolerance must be positive");
  if (max_rounds < 1 || restarts < 1) {
    throw InvalidArgument("see-saw needs max_rounds >= 1 and restarts >= 1");
  }
  if (fixed_state && fixed_state->dim() != dim) {
    throw DimensionError("fixed state dimension differs from the see-saw dimension", dim);
  }
}

namespace {

PovmFamily random_start(int n_inputs, int n_outputs, Index d, std::uint64_t seed) {
  PovmFamily p(n_inputs, n_outputs, d);
  CounterRng rng(seed);
  const Matrix id = Matrix::Identity(d, d);
  for (int x = 0; x < n_inputs; ++x) {
    std::vector<SymMatrix> e;
    for (int a = 0; a < n_outputs; ++a) {
      Vector w(d);
      for (Index i = 0; i < d; ++i) w(i) = rng.normal();
      w /= std::sqrt(static_cast<double>(d));
      e.push_back(SymMatrix::symmetrized((id + w * w.transpose()) / n_outputs));
    }
    e = polish(std::move(e));
    for (int a = 0; a < n_outputs; ++a) p.element(x, a) = e[static_cast<std::size_t>(a)];
  }
  return p;
}

PovmFamily deterministic_family(const DeterministicStrategy& st, const Scenario& s, Index d) {
  if (st.choice.size() != static_cast<std::size_t>(s.n_inputs)) {
    throw ScenarioMismatch("deterministic start has the wrong number of inputs");
  }
  PovmFamily p(s.n_inputs, s.n_outputs, d);
  for (int x = 0; x < s.n_inputs; ++x) {
    const int a = st.choice[static_cast<std::size_t>(x)];
    if (a < 0 || a >= s.n_outputs) throw InvalidArgument("deterministic start output out of range");
    p.element(x, a) = SymMatrix::identity(d);
  }
  return p;
}

std::vector<SymMatrix> input_elements(const PovmFamily& p, int x) {
  std::vector<SymMatrix> e;
  for (int a = 0; a < p.n_outputs(); ++a) e.push_back(p.element(x, a));
  return e;
}

SeesawResult run_restart(const BellFunctional& m, const SeesawConfig& cfg, int restart) {
  const auto& s = m.scenario();
  const std::uint64_t rs = derive_seed(cfg.seed, static_cast<std::uint64_t>(restart));
  SeesawResult r;
  r.best_restart = restart;
  if (restart < cfg.restarts) {
    r.alice = random_start(s.n_inputs, s.n_outputs, cfg.dim, derive_seed(rs, 1));
    r.bob = random_start(s.n_inputs, s.n_outputs, cfg.dim, derive_seed(rs, 2));
  } else {
    r.alice = deterministic_family(cfg.deterministic_start->alice, s, cfg.dim);
    r.bob = deterministic_family(cfg.deterministic_start->bob, s, cfg.dim);
  }
  r.state = cfg.fixed_state ? *cfg.fixed_state : SchmidtState::maximally_entangled(cfg.dim);
  r.value = quantum_value(m, r.alice, r.bob, r.state);
  r.history.push_back(r.value);

  int quiet = 0;
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const double start = r.value;
    for (int x = 0; x < s.n_inputs; ++x) {
      const auto inc = input_elements(r.alice, x);
      auto br = povm_best_response(m, r.bob, r.state, Party::alice, x, &inc, cfg.sdp);
      ++r.method_counts[static_cast<std::size_t>(br.method)];
      for (int a = 0; a < s.n_outputs; ++a) r.alice.element(x, a) = br.elements[a];
    }
    r.value = quantum_value(m, r.alice, r.bob, r.state);
    r.history.push_back(r.value);
    for (int y = 0; y < s.n_inputs; ++y) {
      const auto inc = input_elements(r.bob, y);
      auto br = povm_best_response(m, r.alice, r.state, Party::bob, y, &inc, cfg.sdp);
      ++r.method_counts[static_cast<std::size_t>(br.method)];
      for (int b = 0; b < s.n_outputs; ++b) r.bob.element(y, b) = br.elements[b];
    }
    r.value = quantum_value(m, r.alice, r.bob, r.state);
    r.history.push_back(r.value);

    if (!cfg.fixed_state) {
      const Index d = cfg.dim;
      const auto eig = herm_eig(bell_operator(m, r.alice, r.bob));
      const Vector top = eig.vectors.col(d * d - 1);
      const Matrix psi = Eigen::Map<const Matrix>(top.data(), d, d).transpose();
      Eigen::JacobiSVD<Matrix> svd(psi, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vector sv = svd.singularValues();
      const SchmidtState next =
          SchmidtState::normalized(std::vector<double>(sv.data(), sv.data() + sv.size()));
      const PovmFamily na = r.alice.rotated(svd.matrixU());
      const PovmFamily nb = r.bob.rotated(svd.matrixV());
      const double nv = quantum_value(m, na, nb, next);
      if (nv > r.value) {
        r.alice = na;
        r.bob = nb;
        r.state = next;
        r.value = nv;
      }
      r.history.push_back(r.value);
    }
    r.rounds = round;
    quiet = (r.value - start < cfg.tol) ? quiet + 1 : 0;
    if (quiet >= 3) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace

SeesawResult seesaw(const BellFunctional& m, const SeesawConfig& cfg) {
  cfg.validate();
  const int total = cfg.restarts + (cfg.deterministic_start ? 1 : 0);
  const int jobs = std::max(1, std::min(cfg.jobs, total));
  std::vector<SeesawResult> runs(static_cast<std::size_t>(total));
  if (jobs == 1) {
    for (int i = 0; i < total; ++i) runs[static_cast<std::size_t>(i)] = run_restart(m, cfg, i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < total; i = next++)
          runs[static_cast<std::size_t>(i)] = run_restart(m, cfg, i);
      });
    }
  }
  std::size_t best = 0;
  std::vector<int> counts(4, 0);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].value > runs[best].value) best = i;
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += runs[i].method_counts[k];
  }
  SeesawResult out = std::move(runs[best]);
  out.method_counts = counts;
  return out;
}

MaxEntangledResult max_entangled_value(const BellFunctional& m, const std::vector<Index>& dims,
                                       const SeesawConfig& base) {
  if (dims.empty()) throw InvalidArgument("max_entangled_value needs at least one dimension");
  MaxEntangledResult r;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    SeesawConfig cfg = base;
    cfg.dim = dims[i];
    cfg.fixed_state = SchmidtState::maximally_entangled(dims[i]);
    const double v = seesaw(m, cfg).value;
    r.values.push_back(v);
    if (i == 0 || v > r.value) {
      r.value = v;
      r.best_dim = dims[i];
    }
  }
  return r;
}

}  // namespace bellforge
