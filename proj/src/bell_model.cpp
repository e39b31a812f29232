#include "bellforge/bell_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellforge/error.hpp"

namespace bellforge {

double pair(const BellFunctional& m, const ProbabilityTable& p) {
  if (!(m.scenario() == p.scenario())) {
    throw ScenarioMismatch("functional and probability table have different scenarios");
  }
  const auto& s = m.scenario();
  double total = 0.0;
  for (int x = 0; x < s.n_inputs; ++x)
    for (int y = 0; y < s.n_inputs; ++y)
      for (int a = 0; a < s.n_outputs; ++a)
        for (int b = 0; b < s.n_outputs; ++b) total += m(x, y, a, b) * p.prob(x, y, a, b);
  return total;
}

NonSignallingCheck check_nonsignalling(const ProbabilityTable& p, double tol) {
  const auto& s = p.scenario();
  const int n = s.n_inputs;
  const int k = s.n_outputs;
  double residual = 0.0;
  std::vector<double> first(static_cast<std::size_t>(k));
  // Alice's marginal p(a|x,y) must not depend on y; Bob's symmetric.
  for (int party = 0; party < 2; ++party) {
    for (int own = 0; own < n; ++own) {
      for (int other = 0; other < n; ++other) {
        for (int o = 0; o < k; ++o) {
          double marg = 0.0;
          for (int t = 0; t < k; ++t) {
            marg += party == 0 ? p.prob(own, other, o, t) : p.prob(other, own, t, o);
          }
          if (other == 0) {
            first[static_cast<std::size_t>(o)] = marg;
          } else {
            residual = std::max(residual, std::abs(marg - first[static_cast<std::size_t>(o)]));
          }
        }
      }
    }
  }
  return {residual <= tol, residual};
}

ProbabilityTable quantum_prob_pure(const PovmFamily& alice, const PovmFamily& bob,
                                   const SchmidtState& state) {
  if (alice.n_inputs() != bob.n_inputs() || alice.n_outputs() != bob.n_outputs()) {
    throw ScenarioMismatch("Alice and Bob POVM families describe different scenarios");
  }
  if (alice.dim() != state.dim() || bob.dim() != state.dim()) {
    throw DimensionError("POVM dimension does not match the state dimension", state.dim());
  }
  for (const auto* fam : {&alice, &bob}) {
    const auto rep = validate_povm(*fam, 1e-8);
    if (!rep.pass) {
      throw InvalidPovm("invalid POVM family passed to quantum_prob_pure",
                        std::min(rep.worst_min_eigenvalue, -rep.worst_completeness));
    }
  }
  const Scenario s{alice.n_inputs(), alice.n_outputs()};
  ProbabilityTable p(s);
  const Vector alpha = state.as_vector();
  const Matrix weight = alpha * alpha.transpose();
  // Pre-weight Alice's elements by α_i α_j so each entry is one Frobenius product.
  std::vector<Matrix> weighted;
  weighted.reserve(alice.elements().size());
  for (const auto& e : alice.elements()) weighted.emplace_back(e.dense().cwiseProduct(weight));
  for (int x = 0; x < s.n_inputs; ++x)
    for (int a = 0; a < s.n_outputs; ++a) {
      const Matrix& we = weighted[static_cast<std::size_t>(x) * s.n_outputs + a];
      for (int y = 0; y < s.n_inputs; ++y)
        for (int b = 0; b < s.n_outputs; ++b)
          p.at(x, y, a, b) = we.cwiseProduct(bob.element(y, b).dense()).sum();
    }
  return p;
}

ProbabilityTable deterministic_prob(const Scenario& s, const DeterministicStrategy& alice,
                                    const DeterministicStrategy& bob) {
  const auto n = static_cast<std::size_t>(s.n_inputs);
  if (alice.choice.size() != n || bob.choice.size() != n) {
    throw ScenarioMismatch("deterministic strategy length differs from n_inputs");
  }
  for (const auto* st : {&alice, &bob})
    for (int c : st->choice)
      if (c < 0 || c >= s.n_outputs) throw InvalidArgument("strategy output index out of range");
  ProbabilityTable p(s);
  for (int x = 0; x < s.n_inputs; ++x)
    for (int y = 0; y < s.n_inputs; ++y)
      p.at(x, y, alice.choice[static_cast<std::size_t>(x)], bob.choice[static_cast<std::size_t>(y)]) =
          1.0;
  return p;
}

double zeta1(double quantum_value, double classical_value) {
  if (!(classical_value > 1e-15)) {
    throw UndefinedRatio("violation ratio undefined: classical value " +
                         std::to_string(classical_value) + " is not positive");
  }
  return std::abs(quantum_value) / classical_value;
}

BellFunctional chsh_game() {
  BellFunctional m(Scenario{2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) m.at(x, y, a, b) = 0.25;
  return m;
}

}  // namespace bellforge
