#pragma once

// Shared generators for tests: random connected graphs and random
// strictly convex quadratic instances.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "dlm/case_io.hpp"
#include "dlm/graph.hpp"
#include "dlm/objectives.hpp"
#include "dlm/rng.hpp"

namespace dlm::testing {

/// Random spanning tree plus each remaining pair with probability `p_extra`.
inline GraphTopology random_connected_graph(Rng& rng, std::size_t n, double p_extra = 0.3) {
  std::set<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.insert({rng.below(i), i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.unit() < p_extra) edges.insert({i, j});
  return GraphTopology(n, {edges.begin(), edges.end()});
}

struct Instance {
  std::vector<LocalProblem> problems;
  double total = 0.0;
};

/// Dispatch-flavoured strictly convex instance: gamma in [0.02, 0.08],
/// beta in [1, 5], interval [0, pmax] with pmax in [50, 100], total demand
/// a uniform fraction in [0.3, 0.7] of Σpmax, split equally.
inline Instance random_dispatch_instance(Rng& rng, std::size_t n) {
  DispatchCase c;
  double cap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    GeneratorRecord g;
    g.id = static_cast<int>(i + 1);
    g.bus = g.id;
    g.gamma = rng.uniform(0.02, 0.08);
    g.beta = rng.uniform(1.0, 5.0);
    g.pmin = 0.0;
    g.pmax = rng.uniform(50.0, 100.0);
    cap += g.pmax;
    c.generators.push_back(g);
  }
  c.demand = rng.uniform(0.3, 0.7) * cap;
  return {to_problems(c), c.demand};
}

/// Generic strictly convex instance with signed data: gamma in [0.1, 1],
/// beta in [-5, 5], lo in [-10, 0], hi in [1, 10]; total inside the
/// feasible range, split equally.
inline Instance random_signed_instance(Rng& rng, std::size_t n) {
  std::vector<double> gamma(n), beta(n), lo(n), hi(n);
  double sum_lo = 0.0, sum_hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gamma[i] = rng.uniform(0.1, 1.0);
    beta[i] = rng.uniform(-5.0, 5.0);
    lo[i] = rng.uniform(-10.0, 0.0);
    hi[i] = rng.uniform(1.0, 10.0);
    sum_lo += lo[i];
    sum_hi += hi[i];
  }
  Instance inst;
  inst.total = sum_lo + rng.uniform(0.2, 0.8) * (sum_hi - sum_lo);
  for (std::size_t i = 0; i < n; ++i)
    inst.problems.emplace_back(Quadratic{gamma[i], beta[i], 0.0}, FeasibleInterval(lo[i], hi[i]),
                               inst.total / static_cast<double>(n));
  return inst;
}

inline double total_share(const std::vector<LocalProblem>& ps) {
  double s = 0.0;
  for (const auto& p : ps) s += p.share;
  return s;
}

/// Cheapest allocation with every node but the last on a `points`-point grid
/// of its interval and the last node taking the remainder (kept only when it
/// is feasible). Returns +inf when no grid allocation is feasible.
inline double brute_force_cost(const std::vector<LocalProblem>& ps, double total, int points = 200) {
  const std::size_t n = ps.size();
  std::vector<int> idx(n - 1, 0);
  double best = std::numeric_limits<double>::infinity();
  auto grid = [&](std::size_t i, int j) {
    const auto& iv = ps[i].interval;
    return iv.lo + (iv.hi - iv.lo) * j / (points - 1);
  };
  while (true) {
    double used = 0.0, cost = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double x = grid(i, idx[i]);
      used += x;
      cost += evaluate(ps[i].cost, x);
    }
    const double last = total - used;
    if (ps[n - 1].interval.contains(last)) best = std::min(best, cost + evaluate(ps[n - 1].cost, last));
    std::size_t d = 0;
    while (d < n - 1 && ++idx[d] == points) idx[d++] = 0;
    if (d == n - 1) break;
  }
  return best;
}

}  // namespace dlm::testing
