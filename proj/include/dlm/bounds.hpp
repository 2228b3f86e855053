#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dlm/objectives.hpp"
#include "dlm/schedule.hpp"
#include "dlm/simulator.hpp"
#include "dlm/weights.hpp"

namespace dlm {

/// C = max_i max(|b_i − lo_i|, |b_i − hi_i|), bounding every dual subgradient.
double global_subgradient_bound(std::span<const LocalProblem> problems);

/// Consensus error bound at iteration k:
///   σ₂ᵏ‖λ(0)‖₁ + √n·C·Σ_{t<k} α(t)σ₂^{k−1−t}
/// summed directly in extended precision, smallest terms first.
/// Requires α(0) = 1 (HypothesisViolation otherwise) and σ₂ in [0, 1).
double consensus_error_bound(std::size_t k, const StepSchedule& sched, double sigma2, double lam0_l1, double c,
                             std::size_t n);

/// Cumulative weighted consensus error bound for α(k) = 1/√k:
///   ‖λ(0)‖₁/(1−σ₂) + √n·C·(2 + ln K)/(1−σ₂).
/// Rejects any other schedule.
double weighted_consensus_bound(std::size_t K, const StepSchedule& sched, double sigma2, double lam0_l1, double c,
                                std::size_t n);

/// Dual-gap bound of the time-weighted average at K (α(k) = 1/√k):
///   ‖λ(0) − λ*·1‖₂²/(4√K) + (4√n·C‖λ(0)‖₁ + 5n·C²(2 + ln K))/(4(1−σ₂)√K).
double rate_bound(std::size_t K, std::size_t n, double sigma2, double c, std::span<const double> lam0, double lamstar);

struct BoundRow {
  std::size_t k = 0;
  double observed = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool satisfied = false;
};

struct BoundReport {
  std::size_t n = 0;
  double sigma2 = 0.0;
  double c = 0.0;
  double lam0_l1 = 0.0;
  double lamstar = 0.0;
  std::string schedule;

  /// Every k in 0..iterations: worst node |λ_i(k) − λ̄(k)| vs the consensus bound.
  std::vector<BoundRow> consensus;
  /// Checkpoints, RecipSqrt only: worst node Σα|λ_i − λ̄| vs the weighted bound.
  std::vector<BoundRow> weighted;
  /// Checkpoints, RecipSqrt only: worst node q(avg_i·1) − q(λ*·1) vs rate_bound.
  std::vector<BoundRow> rate;
  /// Smallest observed dual gap over all checkpoints and nodes.
  double min_dual_gap = 0.0;
  bool rate_checked = false;

  bool consensus_satisfied() const;
  bool weighted_satisfied() const;
  bool rate_satisfied() const;
  /// Gap nonnegative up to the oracle tolerance (1e-9).
  bool gap_nonnegative() const { return !rate_checked || min_dual_gap >= -1e-9; }
  bool satisfied() const;

  double worst_slack(const std::vector<BoundRow>& rows) const;
};

/// Powers of ten not exceeding `iterations`.
std::vector<std::size_t> default_checkpoints(std::size_t iterations);

/// Checks the recorded trace against the bounds whose hypotheses its
/// schedule satisfies. Throws HypothesisViolation when α(0) ≠ 1 or the
/// recorded steps increase.
BoundReport check_bounds(const RunTrace& trace, std::span<const LocalProblem> problems, const WeightMatrix& a,
                         double lamstar, std::span<const std::size_t> checkpoints);
BoundReport check_bounds(const RunTrace& trace, std::span<const LocalProblem> problems, const WeightMatrix& a,
                         double lamstar);

/// `k,observed,bound,slack,satisfied`.
void write_bound_rows_csv(const std::vector<BoundRow>& rows, std::ostream& os);
/// Single-line JSON summary: parameters, worst slacks and verdicts.
std::string summary_json(const BoundReport& r);

}  // namespace dlm
