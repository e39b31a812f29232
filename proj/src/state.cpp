#include "bellforge/state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bellforge/error.hpp"

namespace bellforge {

SchmidtState::SchmidtState(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw InvalidArgument("Schmidt state needs at least one coefficient");
  double norm2 = 0.0;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    const double a = alphas_[i];
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("Schmidt coefficients must be finite and nonnegative");
    }
    if (i > 0 && a > alphas_[i - 1]) {
      throw InvalidArgument("Schmidt coefficients must be nonincreasing");
    }
    norm2 += a * a;
  }
  if (std::abs(norm2 - 1.0) > kNormTol) {
    throw InvalidArgument("Schmidt coefficients are not normalized (sum of squares " +
                          std::to_string(norm2) + ")");
  }
}

SchmidtState SchmidtState::normalized(std::vector<double> coefficients) {
  double norm2 = 0.0;
  for (double c : coefficients) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw InvalidArgument("state profile coefficients must be finite and nonnegative");
    }
    norm2 += c * c;
  }
  if (!(norm2 > 0.0)) throw InvalidArgument("state profile is all zero");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : coefficients) c *= inv;
  std::sort(coefficients.begin(), coefficients.end(), std::greater<>());
  return SchmidtState(std::move(coefficients));
}

SchmidtState SchmidtState::maximally_entangled(Index dim) {
  if (dim < 1) throw InvalidArgument("maximally entangled state needs dim >= 1");
  return SchmidtState(std::vector<double>(static_cast<std::size_t>(dim),
                                          1.0 / std::sqrt(static_cast<double>(dim))));
}

namespace {

struct ProfileBuilder {
  SchmidtState operator()(const profile::Explicit& p) const {
    return SchmidtState::normalized(p.alphas);
  }
  SchmidtState operator()(const profile::TwoLevel& p) const {
    if (p.n < 1) throw InvalidArgument("two-level profile needs n >= 1");
    if (!(p.alpha_top >= 0.0 && p.alpha_top <= 1.0)) {
      throw InvalidArgument("two-level profile needs alpha_top in [0, 1]");
    }
    std::vector<double> c(static_cast<std::size_t>(p.n) + 1);
    c[0] = p.alpha_top;
    const double tail = std::sqrt(std::max(0.0, 1.0 - p.alpha_top * p.alpha_top) / p.n);
    std::fill(c.begin() + 1, c.end(), tail);
    return SchmidtState::normalized(std::move(c));
  }
  SchmidtState operator()(const profile::MaximallyEntangled& p) const {
    return SchmidtState::maximally_entangled(p.dim);
  }
};

}  // namespace

SchmidtState build_state(const StateProfile& profile) {
  return std::visit(ProfileBuilder{}, profile);
}

}  // namespace bellforge
