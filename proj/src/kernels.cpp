#include "dlm/kernels.hpp"

#include <cstdint>

#ifdef DLM_HAVE_OPENMP
#include <omp.h>
#endif

namespace dlm::kernels {

namespace {

// λ_i + Σ_{j≠i} a_ij (λ_j − λ_i): equal to (Aλ)_i when row i sums to one,
// and exactly λ_i when all neighbours agree with it.
inline double row_dot(const WeightMatrix& a, std::span<const double> lam, std::size_t i) {
  const auto off = a.row_offsets();
  const auto col = a.col_index();
  const auto val = a.values();
  const double li = lam[i];
  double s = 0.0;
  for (std::size_t p = off[i]; p < off[i + 1]; ++p)
    if (col[p] != i) s += val[p] * (lam[col[p]] - li);
  return li + s;
}

inline void update_node(const LocalProblem& p, double v, double alpha, double& x, double& lam_next) {
  x = primal_argmin(p, v);
  lam_next = v - alpha * (p.share - x);
}

}  // namespace

void consensus_serial(const WeightMatrix& a, std::span<const double> lam, std::span<double> v) {
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = row_dot(a, lam, i);
}

void consensus_parallel(const WeightMatrix& a, std::span<const double> lam, std::span<double> v) {
  const auto n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static) if (a.size() >= kParallelMinNodes)
  for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = row_dot(a, lam, static_cast<std::size_t>(i));
}

void node_update_serial(std::span<const LocalProblem> problems, std::span<const double> v, double alpha,
                        std::span<double> x, std::span<double> lam_next) {
  for (std::size_t i = 0; i < problems.size(); ++i) update_node(problems[i], v[i], alpha, x[i], lam_next[i]);
}

void node_update_parallel(std::span<const LocalProblem> problems, std::span<const double> v, double alpha,
                          std::span<double> x, std::span<double> lam_next) {
  const auto n = static_cast<std::int64_t>(problems.size());
#pragma omp parallel for schedule(static) if (problems.size() >= kParallelMinNodes)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    update_node(problems[u], v[u], alpha, x[u], lam_next[u]);
  }
}

int max_threads() {
#ifdef DLM_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace dlm::kernels
