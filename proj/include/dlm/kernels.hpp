#pragma once

// Per-round kernels of the simulator. Each kernel has a serial reference and
// an OpenMP version; both evaluate every output entry with the same
// operation order, so their results are bitwise identical.

#include <cstddef>
#include <span>

#include "dlm/objectives.hpp"
#include "dlm/weights.hpp"

namespace dlm {

enum class Execution { Serial, Parallel };

/// Below this many nodes the parallel kernels run on one thread.
inline constexpr std::size_t kParallelMinNodes = 512;

namespace kernels {

/// v = A·lam over the compressed rows of A (columns ascending), evaluated as
/// lam_i + Σ_{j≠i} a_ij (lam_j − lam_i) so the diagonal is the row's complement.
void consensus_serial(const WeightMatrix& a, std::span<const double> lam, std::span<double> v);
void consensus_parallel(const WeightMatrix& a, std::span<const double> lam, std::span<double> v);

/// x_i = primal_argmin(p_i, v_i); lam_next_i = v_i − alpha·(b_i − x_i).
void node_update_serial(std::span<const LocalProblem> problems, std::span<const double> v, double alpha,
                        std::span<double> x, std::span<double> lam_next);
void node_update_parallel(std::span<const LocalProblem> problems, std::span<const double> v, double alpha,
                          std::span<double> x, std::span<double> lam_next);

inline void consensus(Execution e, const WeightMatrix& a, std::span<const double> lam, std::span<double> v) {
  e == Execution::Parallel ? consensus_parallel(a, lam, v) : consensus_serial(a, lam, v);
}

inline void node_update(Execution e, std::span<const LocalProblem> problems, std::span<const double> v, double alpha,
                        std::span<double> x, std::span<double> lam_next) {
  e == Execution::Parallel ? node_update_parallel(problems, v, alpha, x, lam_next)
                           : node_update_serial(problems, v, alpha, x, lam_next);
}

/// Threads the parallel kernels would use (1 without OpenMP).
int max_threads();

}  // namespace kernels
}  // namespace dlm
