#include "dlm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dlm/errors.hpp"
#include "dlm/trace_io.hpp"

namespace dlm {

namespace {

double allocation(std::span<const LocalProblem> problems, double lam, std::vector<double>* x = nullptr) {
  double s = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const double xi = primal_argmin(problems[i], lam);
    if (x) (*x)[i] = xi;
    s += xi;
  }
  return s;
}

double initial_half_width(std::span<const LocalProblem> problems) {
  double m = 0.0;
  for (const auto& p : problems) {
    const double reach = std::max(std::abs(p.interval.lo), std::abs(p.interval.hi));
    if (const auto* q = std::get_if<Quadratic>(&p.cost)) m = std::max(m, std::abs(q->beta) + 2.0 * q->gamma * reach);
  }
  return 1.0 + m;
}

}  // namespace

OracleSolution solve_centralized(std::span<const LocalProblem> problems, double b, const OracleOptions& opts) {
  if (problems.empty()) throw InvalidArgument("solve_centralized: no problems");
  double sum_lo = 0.0, sum_hi = 0.0;
  for (const auto& p : problems) {
    sum_lo += p.interval.lo;
    sum_hi += p.interval.hi;
  }
  if (b < sum_lo || b > sum_hi)
    throw InfeasibleTotal("total " + format_real(b) + " outside [" + format_real(sum_lo) + ", " + format_real(sum_hi) + "]");

  // g(lo_lam) >= b >= g(hi_lam) brackets the multiplier.
  double half = initial_half_width(problems);
  double lo_lam = -half, hi_lam = half;
  std::size_t doublings = 0;
  while (!(allocation(problems, lo_lam) >= b && allocation(problems, hi_lam) <= b)) {
    if (++doublings > opts.max_bracket_doublings)
      throw BracketFailure("no sign change of g(lambda) - b within |lambda| <= " + format_real(half));
    half *= 2.0;
    lo_lam = -half;
    hi_lam = half;
  }

  const std::size_t n = problems.size();
  double g_prev_lo = allocation(problems, lo_lam);
  for (std::size_t it = 0; it < opts.max_bisections; ++it) {
    const double mid = 0.5 * (lo_lam + hi_lam);
    if (mid == lo_lam || mid == hi_lam) break;
    const double g = allocation(problems, mid);
    // Golden-section argmins are only accurate to ~1e-8, so allow that much noise.
    if (g > g_prev_lo + 1e-6 * (1.0 + std::abs(g_prev_lo))) throw BracketFailure("g(lambda) is not nonincreasing along the bisection path");
    if (std::abs(g - b) <= opts.tol) {
      lo_lam = hi_lam = mid;
      break;
    }
    if (g > b) {
      lo_lam = mid;
      g_prev_lo = g;
    } else {
      hi_lam = mid;
    }
  }

  // With plateaus (gamma = 0) g jumps; take whichever end lands closer.
  OracleSolution sol;
  std::vector<double> x_lo(n), x_hi(n);
  const double r_lo = std::abs(allocation(problems, lo_lam, &x_lo) - b);
  const double r_hi = std::abs(allocation(problems, hi_lam, &x_hi) - b);
  if (r_lo <= r_hi) {
    sol.lam_star = lo_lam;
    sol.x_star = std::move(x_lo);
    sol.residual = r_lo;
  } else {
    sol.lam_star = hi_lam;
    sol.x_star = std::move(x_hi);
    sol.residual = r_hi;
  }
  for (std::size_t i = 0; i < n; ++i) sol.f_star += evaluate(problems[i].cost, sol.x_star[i]);
  return sol;
}

bool verify_kkt(std::span<const LocalProblem> problems, double b, const OracleSolution& sol, double tol) {
  if (sol.x_star.size() != problems.size()) return false;
  double total = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const auto& p = problems[i];
    const double xi = sol.x_star[i];
    if (!p.interval.contains(xi)) return false;
    const double best = primal_argmin(p, sol.lam_star);
    const double at_x = evaluate(p.cost, xi) + sol.lam_star * xi;
    const double at_best = evaluate(p.cost, best) + sol.lam_star * best;
    if (at_x - at_best > tol) return false;
    total += xi;
  }
  return std::abs(total - b) <= tol;
}

}  // namespace dlm
