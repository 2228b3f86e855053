#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dlm/kernels.hpp"
#include "dlm/objectives.hpp"
#include "dlm/schedule.hpp"
#include "dlm/weights.hpp"

namespace dlm {

/// Iterates held by one node plus the accumulators of its time-weighted
/// dual average Σα(k)λ_i(k) / Σα(k).
struct AgentState {
  double x = 0.0;
  double lam = 0.0;
  double v = 0.0;
  double wsum = 0.0;
  double asum = 0.0;
};

/// wsum / asum. Throws InvalidArgument when nothing was accumulated.
double weighted_dual_average(const AgentState& s);

/// Complete record of a run. Row k (0..iterations) holds x(k), λ(k), v(k);
/// row 0 is the initial state and has v = NaN.
struct RunTrace {
  std::size_t n = 0;
  std::size_t iterations = 0;
  StepSchedule schedule = RecipSqrt{};
  std::vector<double> shares;  // b_i
  std::vector<double> alpha;   // α(k) consumed in round k, size `iterations`

  std::vector<double> x;
  std::vector<double> lambda;
  std::vector<double> v;

  // Derived columns, one entry per row.
  std::vector<double> residual;    // Σ_i (x_i(k) − b_i)
  std::vector<double> lagrangian;  // L(x(k), λ(k−1)); NaN at row 0
  std::vector<double> dual;        // q(λ̄(k)·1)
  std::vector<double> spread;      // max_i |λ_i(k) − λ̄(k)|

  std::vector<AgentState> agents;  // state after the last round

  std::size_t rows() const noexcept { return iterations + 1; }
  std::span<const double> x_row(std::size_t k) const { return {x.data() + k * n, n}; }
  std::span<const double> lambda_row(std::size_t k) const { return {lambda.data() + k * n, n}; }
  std::span<const double> v_row(std::size_t k) const { return {v.data() + k * n, n}; }
  double lambda_mean(std::size_t k) const;
};

struct RunOptions {
  std::size_t iterations = 1;
  std::optional<std::vector<double>> init_lams;  // default: zeros
  std::optional<std::vector<double>> init_x;     // default: interval midpoints
  Execution execution = Execution::Parallel;
};

/// v = A·lams. Throws InvalidArgument on dimension mismatch.
std::vector<double> consensus_step(const WeightMatrix& a, std::span<const double> lams);

/// λ_i(k+1) = v − α·(b − x): a step of length α against the subgradient
/// b − x of q_i at v.
double dual_step(double v, double alpha, double x, double b);

/// Σ_i f_i(x_i) + mults_i·(x_i − b_i).
double lagrangian_value(std::span<const LocalProblem> problems, std::span<const double> x,
                        std::span<const double> mults);

/// Σ_i q_i(lam).
double dual_sum(std::span<const LocalProblem> problems, double lam);

/// Runs `iterations` synchronous rounds of consensus, primal argmin and dual
/// step. The output does not depend on the execution policy.
RunTrace run_dlm(std::span<const LocalProblem> problems, const WeightMatrix& a, const StepSchedule& sched,
                 const RunOptions& opts);

RunTrace run_dlm(std::span<const LocalProblem> problems, const WeightMatrix& a, const StepSchedule& sched,
                 std::size_t iterations, std::span<const double> init_lams);

/// Fills residual, lagrangian, dual and spread from the x/λ columns.
void compute_derived(RunTrace& trace, std::span<const LocalProblem> problems);

}  // namespace dlm
