#include "bellforge/scenario.hpp"

#include <cmath>
#include <string>

#include "bellforge/error.hpp"

namespace bellforge {

void Scenario::validate() const {
  if (n_inputs < 1 || n_outputs < 1) {
    throw InvalidArgument("scenario needs n_inputs >= 1 and n_outputs >= 1, got (" +
                          std::to_string(n_inputs) + ", " + std::to_string(n_outputs) + ")");
  }
}

BellTensor::BellTensor(Scenario s) : scenario_(s) {
  scenario_.validate();
  values_.assign(scenario_.size(), 0.0);
}

BellTensor::BellTensor(Scenario s, std::vector<double> values)
    : scenario_(s), values_(std::move(values)) {
  scenario_.validate();
  if (values_.size() != scenario_.size()) {
    throw DimensionError("tensor has " + std::to_string(values_.size()) +
                             " entries, scenario requires " + std::to_string(scenario_.size()),
                         static_cast<std::int64_t>(scenario_.size()));
  }
}

BellFunctional::BellFunctional(Scenario s, std::vector<double> values)
    : BellTensor(s, std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("Bell functional has a non-finite coefficient");
  }
}

BellFunctional BellFunctional::scaled(double lambda) const {
  BellFunctional out = *this;
  for (double& v : out.values_) v *= lambda;
  out.provenance.reset();
  return out;
}

void ProbabilityTable::validate(double tol) const {
  const auto& s = scenario_;
  for (int x = 0; x < s.n_inputs; ++x) {
    for (int y = 0; y < s.n_inputs; ++y) {
      double total = 0.0;
      for (int a = 0; a < s.n_outputs; ++a) {
        for (int b = 0; b < s.n_outputs; ++b) {
          const double v = (*this)(x, y, a, b);
          if (!(v >= -kNegativeSlack)) {
            throw InvalidArgument("probability entry " + std::to_string(v) + " below zero at (x=" +
                                  std::to_string(x) + ", y=" + std::to_string(y) + ")");
          }
          total += v;
        }
      }
      if (std::abs(total - 1.0) > tol) {
        throw InvalidArgument("probability block (x=" + std::to_string(x) + ", y=" +
                              std::to_string(y) + ") sums to " + std::to_string(total));
      }
    }
  }
}

}  // namespace bellforge
