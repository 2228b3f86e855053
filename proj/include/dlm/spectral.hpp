#pragma once

#include <cstddef>

#include "dlm/weights.hpp"

namespace dlm {

struct PowerIterationOptions {
  double rel_tol = 1e-12;
  std::size_t max_iters = 2'000'000;
  // Consecutive iterations whose relative change must stay under rel_tol.
  std::size_t stable_window = 20;
};

/// Largest dimension handled by the dense one-sided Jacobi route.
inline constexpr std::size_t kDenseSpectralLimit = 64;

/// Second-largest singular value of a doubly stochastic matrix. Uses the
/// dense Jacobi route for n <= kDenseSpectralLimit and deflated power
/// iteration otherwise.
double sigma2(const DenseMatrix& a);

/// All singular values (descending) by one-sided Jacobi rotations.
std::vector<double> singular_values_jacobi(const DenseMatrix& a);

/// Power iteration on AᵀA restricted to the complement of the all-ones
/// vector. Requires unit row and column sums; throws ConvergenceError when
/// max_iters is exhausted.
double sigma2_power_iteration(const DenseMatrix& a, const PowerIterationOptions& opts = {});

}  // namespace dlm
