#include "dlm/simulator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dlm/errors.hpp"

namespace dlm {

double weighted_dual_average(const AgentState& s) {
  if (!(s.asum > 0.0)) throw InvalidArgument("weighted_dual_average: no step sizes accumulated");
  return s.wsum / s.asum;
}

double RunTrace::lambda_mean(std::size_t k) const {
  double s = 0.0;
  for (double l : lambda_row(k)) s += l;
  return s / static_cast<double>(n);
}

std::vector<double> consensus_step(const WeightMatrix& a, std::span<const double> lams) {
  if (lams.size() != a.size())
    throw InvalidArgument("consensus_step: matrix is " + std::to_string(a.size()) + "x" + std::to_string(a.size()) +
                          ", vector has " + std::to_string(lams.size()) + " entries");
  std::vector<double> v(lams.size());
  kernels::consensus_serial(a, lams, v);
  return v;
}

double dual_step(double v, double alpha, double x, double b) { return v - alpha * (b - x); }

double lagrangian_value(std::span<const LocalProblem> problems, std::span<const double> x,
                        std::span<const double> mults) {
  if (x.size() != problems.size() || mults.size() != problems.size())
    throw InvalidArgument("lagrangian_value: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i)
    s += evaluate(problems[i].cost, x[i]) + mults[i] * (x[i] - problems[i].share);
  return s;
}

double dual_sum(std::span<const LocalProblem> problems, double lam) {
  double s = 0.0;
  for (const auto& p : problems) s += dual_value(p, lam);
  return s;
}

void compute_derived(RunTrace& t, std::span<const LocalProblem> problems) {
  const std::size_t rows = t.rows();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.residual.assign(rows, 0.0);
  t.lagrangian.assign(rows, nan);
  t.dual.assign(rows, 0.0);
  t.spread.assign(rows, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    auto xk = t.x_row(k);
    double r = 0.0;
    for (std::size_t i = 0; i < t.n; ++i) r += xk[i] - t.shares[i];
    t.residual[k] = r;

    const double mean = t.lambda_mean(k);
    double spread = 0.0;
    for (double l : t.lambda_row(k)) spread = std::max(spread, std::abs(l - mean));
    t.spread[k] = spread;
    t.dual[k] = dual_sum(problems, mean);
    if (k > 0) t.lagrangian[k] = lagrangian_value(problems, xk, t.lambda_row(k - 1));
  }
}

RunTrace run_dlm(std::span<const LocalProblem> problems, const WeightMatrix& a, const StepSchedule& sched,
                 const RunOptions& opts) {
  const std::size_t n = problems.size();
  if (n < 2) throw InvalidArgument("run_dlm needs at least 2 nodes");
  if (a.size() != n) throw InvalidArgument("run_dlm: weight matrix size does not match problem count");
  if (opts.iterations == 0) throw InvalidArgument("run_dlm: iterations must be >= 1");

  RunTrace t;
  t.n = n;
  t.iterations = opts.iterations;
  t.schedule = sched;
  t.shares.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.shares[i] = problems[i].share;
  const std::size_t rows = t.rows();
  t.x.resize(rows * n);
  t.lambda.resize(rows * n);
  t.v.resize(rows * n);
  t.alpha.resize(opts.iterations);

  for (std::size_t i = 0; i < n; ++i) {
    t.lambda[i] = 0.0;
    t.x[i] = problems[i].interval.midpoint();
    t.v[i] = std::numeric_limits<double>::quiet_NaN();
  }
  if (opts.init_lams) {
    if (opts.init_lams->size() != n) throw InvalidArgument("run_dlm: init_lams has wrong size");
    std::copy(opts.init_lams->begin(), opts.init_lams->end(), t.lambda.begin());
  }
  if (opts.init_x) {
    if (opts.init_x->size() != n) throw InvalidArgument("run_dlm: init_x has wrong size");
    std::copy(opts.init_x->begin(), opts.init_x->end(), t.x.begin());
  }

  std::vector<AgentState> agents(n);
  for (std::size_t k = 0; k < opts.iterations; ++k) {
    const double alpha = sched(k);
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw InvalidArgument("step size must be positive and finite, got " + std::to_string(alpha) + " at k=" +
                            std::to_string(k));
    t.alpha[k] = alpha;

    std::span<const double> lam_k{t.lambda.data() + k * n, n};
    for (std::size_t i = 0; i < n; ++i) {
      agents[i].wsum += alpha * lam_k[i];
      agents[i].asum += alpha;
    }
    std::span<double> v_next{t.v.data() + (k + 1) * n, n};
    std::span<double> x_next{t.x.data() + (k + 1) * n, n};
    std::span<double> lam_next{t.lambda.data() + (k + 1) * n, n};
    kernels::consensus(opts.execution, a, lam_k, v_next);
    kernels::node_update(opts.execution, problems, v_next, alpha, x_next, lam_next);
  }

  const std::size_t last = opts.iterations;
  for (std::size_t i = 0; i < n; ++i) {
    agents[i].x = t.x[last * n + i];
    agents[i].lam = t.lambda[last * n + i];
    agents[i].v = t.v[last * n + i];
  }
  t.agents = std::move(agents);
  compute_derived(t, problems);
  return t;
}

RunTrace run_dlm(std::span<const LocalProblem> problems, const WeightMatrix& a, const StepSchedule& sched,
                 std::size_t iterations, std::span<const double> init_lams) {
  RunOptions opts;
  opts.iterations = iterations;
  opts.init_lams = std::vector<double>(init_lams.begin(), init_lams.end());
  return run_dlm(problems, a, sched, opts);
}

}  // namespace dlm
