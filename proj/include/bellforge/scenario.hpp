#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bellforge {

/// Symmetric bipartite scenario: both parties choose among `n_inputs`
/// settings and observe one of `n_outputs` outcomes. Indices are 0-based.
struct Scenario {
  int n_inputs = 1;
  int n_outputs = 1;

  /// Number of (x, y, a, b) entries.
  std::size_t size() const noexcept {
    const auto n = static_cast<std::size_t>(n_inputs);
    const auto k = static_cast<std::size_t>(n_outputs);
    return n * n * k * k;
  }
  std::size_t index(int x, int y, int a, int b) const noexcept {
    return ((static_cast<std::size_t>(x) * n_inputs + y) * n_outputs + a) * n_outputs + b;
  }
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Dense tensor over (x, y, a, b) shared by Bell functionals and
/// probability tables.
class BellTensor {
 public:
  BellTensor() = default;
  explicit BellTensor(Scenario s);
  BellTensor(Scenario s, std::vector<double> values);

  const Scenario& scenario() const noexcept { return scenario_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator()(int x, int y, int a, int b) const {
    return values_[scenario_.index(x, y, a, b)];
  }
  double& at(int x, int y, int a, int b) { return values_[scenario_.index(x, y, a, b)]; }

 protected:
  Scenario scenario_;
  std::vector<double> values_;
};

/// Real coefficients M[x][y][a][b]. `provenance` fingerprints the sign tensor
/// a construction-built functional came from.
class BellFunctional : public BellTensor {
 public:
  using BellTensor::BellTensor;
  BellFunctional(Scenario s, std::vector<double> values);

  std::optional<std::uint64_t> provenance;

  BellFunctional scaled(double lambda) const;
};

/// Conditional probabilities p(a,b|x,y). Entries down to -1e-12 are accepted
/// (eigen round-off) and read back clamped at zero through `prob`.
class ProbabilityTable : public BellTensor {
 public:
  using BellTensor::BellTensor;

  static constexpr double kNegativeSlack = 1e-12;

  double prob(int x, int y, int a, int b) const {
    const double v = (*this)(x, y, a, b);
    return v < 0.0 ? 0.0 : v;
  }

  /// Throws InvalidArgument unless every entry is ≥ -1e-12 and every (x,y)
  /// block sums to one within `tol`.
  void validate(double tol = 1e-9) const;
};

/// Output choice per input, values in [0, n_outputs).
struct DeterministicStrategy {
  std::vector<int> choice;
  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

struct StrategyPair {
  DeterministicStrategy alice;
  DeterministicStrategy bob;
};

}  // namespace bellforge
