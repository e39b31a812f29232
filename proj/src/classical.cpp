#include "bellforge/classical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bellforge/error.hpp"
#include "bellforge/random.hpp"

namespace bellforge {

namespace {

using Row = std::vector<double>;

/// rows[x][a] holds M(x, ·, a, ·) flattened y-major, length N·K.
std::vector<std::vector<Row>> alice_rows(const BellFunctional& m) {
  const auto& s = m.scenario();
  const int n = s.n_inputs;
  const int k = s.n_outputs;
  std::vector<std::vector<Row>> rows(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    rows[x].assign(static_cast<std::size_t>(k), Row(static_cast<std::size_t>(n) * k));
    for (int a = 0; a < k; ++a)
      for (int y = 0; y < n; ++y)
        for (int b = 0; b < k; ++b) rows[x][a][static_cast<std::size_t>(y) * k + b] = m(x, y, a, b);
  }
  return rows;
}

/// Odometer over options[1..N-1] with digit 0 fixed, last input fastest.
/// Prefix sums are rebuilt from the changed digit onward, so every leaf's
/// c vector is summed over x in the same fixed order.
template <class Leaf>
void enumerate_chunk(const std::vector<std::vector<Row>>& options, int digit0, Leaf&& leaf) {
  const int n = static_cast<int>(options.size());
  const std::size_t width = options[0][0].size();
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  digits[0] = digit0;
  std::vector<Row> prefix(static_cast<std::size_t>(n) + 1, Row(width, 0.0));
  auto rebuild = [&](int from) {
    for (int x = from; x < n; ++x) {
      const Row& add = options[x][digits[x]];
      const Row& prev = prefix[x];
      Row& out = prefix[x + 1];
      for (std::size_t i = 0; i < width; ++i) out[i] = prev[i] + add[i];
    }
  };
  rebuild(0);
  while (true) {
    leaf(prefix[n], digits);
    int x = n - 1;
    while (x >= 1) {
      if (++digits[x] < static_cast<int>(options[x].size())) break;
      digits[x] = 0;
      --x;
    }
    if (x < 1) return;
    rebuild(x);
  }
}

template <class ChunkFn>
void run_chunks(int chunks, int jobs, ChunkFn&& fn) {
  jobs = std::max(1, std::min(jobs, chunks));
  if (jobs == 1) {
    for (int c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (int c = next++; c < chunks; c = next++) fn(c);
    });
  }
}

struct Extremes {
  double max_value = -std::numeric_limits<double>::infinity();
  double min_value = std::numeric_limits<double>::infinity();
  std::vector<int> argmax_alice;
  std::vector<int> argmin_alice;
};

DeterministicStrategy bob_response(const Row& c, int n, int k, bool maximize) {
  DeterministicStrategy bob;
  bob.choice.resize(static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) {
    const double* cy = c.data() + static_cast<std::size_t>(y) * k;
    int best = 0;
    for (int b = 1; b < k; ++b) {
      if (maximize ? cy[b] > cy[best] : cy[b] < cy[best]) best = b;
    }
    bob.choice[static_cast<std::size_t>(y)] = best;
  }
  return bob;
}

Row column_sums(const std::vector<std::vector<Row>>& rows, const std::vector<int>& alice) {
  Row c(rows[0][0].size(), 0.0);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const Row& r = rows[x][static_cast<std::size_t>(alice[x])];
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += r[i];
  }
  return c;
}

double pow_checked(double base, int exp) { return std::pow(base, exp); }

}  // namespace

double classical_exact_cost(const Scenario& s) {
  return pow_checked(s.n_outputs, s.n_inputs) * s.n_inputs * s.n_outputs;
}

double epsilon_norm_cost(const Scenario& s) { return pow_checked(2.0 * s.n_outputs, s.n_inputs); }

ClassicalResult classical_value_exact(const BellFunctional& m, const ClassicalOptions& opt) {
  const auto& s = m.scenario();
  const double cost = classical_exact_cost(s);
  if (cost > opt.budget) {
    throw BudgetExceeded("exact classical value needs " + std::to_string(cost) +
                             " evaluations, budget is " + std::to_string(opt.budget),
                         cost, opt.budget);
  }
  const int n = s.n_inputs;
  const int k = s.n_outputs;
  const auto rows = alice_rows(m);

  std::vector<Extremes> per_chunk(static_cast<std::size_t>(k));
  run_chunks(k, opt.jobs, [&](int chunk) {
    Extremes& ex = per_chunk[static_cast<std::size_t>(chunk)];
    enumerate_chunk(rows, chunk, [&](const Row& c, const std::vector<int>& digits) {
      double hi = 0.0;
      double lo = 0.0;
      for (int y = 0; y < n; ++y) {
        const double* cy = c.data() + static_cast<std::size_t>(y) * k;
        double bmax = cy[0];
        double bmin = cy[0];
        for (int b = 1; b < k; ++b) {
          bmax = std::max(bmax, cy[b]);
          bmin = std::min(bmin, cy[b]);
        }
        hi += bmax;
        lo += bmin;
      }
      if (hi > ex.max_value) {
        ex.max_value = hi;
        ex.argmax_alice = digits;
      }
      if (lo < ex.min_value) {
        ex.min_value = lo;
        ex.argmin_alice = digits;
      }
    });
  });

  Extremes best;
  for (const auto& ex : per_chunk) {
    if (ex.max_value > best.max_value) {
      best.max_value = ex.max_value;
      best.argmax_alice = ex.argmax_alice;
    }
    if (ex.min_value < best.min_value) {
      best.min_value = ex.min_value;
      best.argmin_alice = ex.argmin_alice;
    }
  }

  ClassicalResult r;
  r.exact = true;
  r.max_value = best.max_value;
  r.min_value = best.min_value;
  r.value = std::max(std::abs(r.max_value), std::abs(r.min_value));
  r.argmax.alice.choice = best.argmax_alice;
  r.argmax.bob = bob_response(column_sums(rows, best.argmax_alice), n, k, true);
  r.argmin.alice.choice = best.argmin_alice;
  r.argmin.bob = bob_response(column_sums(rows, best.argmin_alice), n, k, false);
  return r;
}

namespace {

double evaluate_pair(const std::vector<std::vector<Row>>& rows, const std::vector<int>& alice,
                     const std::vector<int>& bob, int k) {
  double total = 0.0;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const Row& r = rows[x][static_cast<std::size_t>(alice[x])];
    for (std::size_t y = 0; y < bob.size(); ++y) total += r[y * k + bob[y]];
  }
  return total;
}

/// Alice's best response to a fixed Bob; lowest output wins ties.
std::vector<int> alice_response(const std::vector<std::vector<Row>>& rows, const std::vector<int>& bob,
                                int k, bool maximize) {
  std::vector<int> alice(rows.size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    int best = 0;
    double best_v = 0.0;
    for (int a = 0; a < k; ++a) {
      double v = 0.0;
      const Row& r = rows[x][static_cast<std::size_t>(a)];
      for (std::size_t y = 0; y < bob.size(); ++y) v += r[y * k + bob[y]];
      if (a == 0 || (maximize ? v > best_v : v < best_v)) {
        best = a;
        best_v = v;
      }
    }
    alice[x] = best;
  }
  return alice;
}

struct LocalRun {
  double value;
  StrategyPair pair;
};

LocalRun local_descent(const std::vector<std::vector<Row>>& rows, std::vector<int> alice, int n,
                       int k, bool maximize) {
  const double sign = maximize ? 1.0 : -1.0;
  DeterministicStrategy bob = bob_response(column_sums(rows, alice), n, k, maximize);
  double value = evaluate_pair(rows, alice, bob.choice, k);
  // Each accepted step strictly improves a finite objective, so this ends.
  for (int iter = 0; iter < 10000; ++iter) {
    auto next_alice = alice_response(rows, bob.choice, k, maximize);
    auto next_bob = bob_response(column_sums(rows, next_alice), n, k, maximize);
    const double next_value = evaluate_pair(rows, next_alice, next_bob.choice, k);
    if (!(sign * next_value > sign * value)) break;
    alice = std::move(next_alice);
    bob = std::move(next_bob);
    value = next_value;
  }
  return {value, {DeterministicStrategy{alice}, bob}};
}

}  // namespace

ClassicalResult classical_value_local(const BellFunctional& m, int restarts, std::uint64_t seed) {
  const auto& s = m.scenario();
  const int n = s.n_inputs;
  const int k = s.n_outputs;
  const auto rows = alice_rows(m);
  restarts = std::max(1, restarts);

  ClassicalResult r;
  r.exact = false;
  r.max_value = -std::numeric_limits<double>::infinity();
  r.min_value = std::numeric_limits<double>::infinity();
  for (int rs = 0; rs < restarts; ++rs) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(rs)));
    std::vector<int> start(static_cast<std::size_t>(n));
    for (auto& a : start) a = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    const auto up = local_descent(rows, start, n, k, true);
    if (up.value > r.max_value) {
      r.max_value = up.value;
      r.argmax = up.pair;
    }
    const auto down = local_descent(rows, start, n, k, false);
    if (down.value < r.min_value) {
      r.min_value = down.value;
      r.argmin = down.pair;
    }
  }
  r.value = std::max(std::abs(r.max_value), std::abs(r.min_value));
  return r;
}

double epsilon_norm_exact(const BellFunctional& m, const ClassicalOptions& opt) {
  const auto& s = m.scenario();
  const double cost = epsilon_norm_cost(s);
  if (cost > opt.budget) {
    throw BudgetExceeded("exact epsilon norm needs " + std::to_string(cost) +
                             " signed extreme points, budget is " + std::to_string(opt.budget),
                         cost, opt.budget);
  }
  const int n = s.n_inputs;
  const int k = s.n_outputs;
  const auto rows = alice_rows(m);
  // Options per input: (a, +) for a < K, then (a, −). A global sign flip
  // leaves the objective unchanged, so input 0 only takes positive signs.
  std::vector<std::vector<Row>> options(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < k; ++a) options[x].push_back(rows[x][a]);
    if (x == 0) continue;
    for (int a = 0; a < k; ++a) {
      Row neg = rows[x][a];
      for (double& v : neg) v = -v;
      options[x].push_back(std::move(neg));
    }
  }
  std::vector<double> per_chunk(static_cast<std::size_t>(k), 0.0);
  run_chunks(k, opt.jobs, [&](int chunk) {
    double best = 0.0;
    enumerate_chunk(options, chunk, [&](const Row& c, const std::vector<int>&) {
      double total = 0.0;
      for (int y = 0; y < n; ++y) {
        const double* cy = c.data() + static_cast<std::size_t>(y) * k;
        double bmax = 0.0;
        for (int b = 0; b < k; ++b) bmax = std::max(bmax, std::abs(cy[b]));
        total += bmax;
      }
      best = std::max(best, total);
    });
    per_chunk[static_cast<std::size_t>(chunk)] = best;
  });
  return *std::max_element(per_chunk.begin(), per_chunk.end());
}

}  // namespace bellforge
