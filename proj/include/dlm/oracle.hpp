#pragma once

#include <span>
#include <vector>

#include "dlm/objectives.hpp"

namespace dlm {

struct OracleSolution {
  std::vector<double> x_star;
  double f_star = 0.0;
  double lam_star = 0.0;
  double residual = 0.0;  // |Σx* − b|
};

struct OracleOptions {
  double tol = 1e-9;             // target |Σx − b|
  std::size_t max_bisections = 400;
  std::size_t max_bracket_doublings = 200;
};

/// Centralized price bisection: g(λ) = Σ_i primal_argmin(p_i, λ) is
/// nonincreasing, so the λ* with g(λ*) = b is found by bisection on an
/// expanding bracket. Throws InfeasibleTotal when b is outside [Σlo, Σhi]
/// and BracketFailure when no sign change is found.
OracleSolution solve_centralized(std::span<const LocalProblem> problems, double b, const OracleOptions& opts = {});

/// x*_i minimizes f_i(x) + λ*·x over X_i (within tol) and |Σx* − b| <= tol.
bool verify_kkt(std::span<const LocalProblem> problems, double b, const OracleSolution& sol, double tol = 1e-8);

}  // namespace dlm
