#include "dlm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "dlm/errors.hpp"
#include "dlm/trace_io.hpp"

namespace dlm {

namespace {

void require_sigma(double sigma2) {
  if (!(sigma2 >= 0.0 && sigma2 < 1.0)) throw HypothesisViolation("sigma2 must lie in [0, 1), got " + format_real(sigma2));
}

void require_normalized(const StepSchedule& sched) {
  if (!sched.starts_at_one())
    throw HypothesisViolation("step size must satisfy alpha(0) = 1, got alpha(0) = " + format_real(sched(0)) + " (" +
                              sched.describe() + ")");
}

void require_recip_sqrt(const StepSchedule& sched) {
  if (!sched.is_recip_sqrt())
    throw HypothesisViolation("bound requires alpha(k) = 1/sqrt(k) with alpha(0) = 1, got " + sched.describe());
}

}  // namespace

double global_subgradient_bound(std::span<const LocalProblem> problems) {
  if (problems.empty()) throw InvalidArgument("global_subgradient_bound: empty problem list");
  double c = 0.0;
  for (const auto& p : problems) c = std::max(c, subgradient_bound(p));
  return c;
}

double consensus_error_bound(std::size_t k, const StepSchedule& sched, double sigma2, double lam0_l1, double c,
                             std::size_t n) {
  require_normalized(sched);
  require_sigma(sigma2);
  using LD = long double;
  const LD s = sigma2;
  std::vector<LD> terms;
  terms.reserve(k);
  for (std::size_t t = 0; t < k; ++t) terms.push_back(static_cast<LD>(sched(t)) * std::pow(s, static_cast<LD>(k - 1 - t)));
  std::sort(terms.begin(), terms.end());
  LD sum = 0.0L;
  for (LD term : terms) sum += term;
  const LD head = std::pow(s, static_cast<LD>(k)) * static_cast<LD>(lam0_l1);
  return static_cast<double>(head + std::sqrt(static_cast<LD>(n)) * static_cast<LD>(c) * sum);
}

double weighted_consensus_bound(std::size_t K, const StepSchedule& sched, double sigma2, double lam0_l1, double c,
                                std::size_t n) {
  if (K < 1) throw InvalidArgument("weighted_consensus_bound needs K >= 1");
  require_recip_sqrt(sched);
  require_sigma(sigma2);
  const double gap = 1.0 - sigma2;
  return lam0_l1 / gap + std::sqrt(static_cast<double>(n)) * c * (2.0 + std::log(static_cast<double>(K))) / gap;
}

double rate_bound(std::size_t K, std::size_t n, double sigma2, double c, std::span<const double> lam0, double lamstar) {
  if (K < 1) throw InvalidArgument("rate_bound needs K >= 1");
  require_sigma(sigma2);
  double dist2 = 0.0, l1 = 0.0;
  for (double l : lam0) {
    dist2 += (l - lamstar) * (l - lamstar);
    l1 += std::abs(l);
  }
  const double nd = static_cast<double>(n);
  const double root_k = std::sqrt(static_cast<double>(K));
  const double log_term = 2.0 + std::log(static_cast<double>(K));
  return dist2 / (4.0 * root_k) +
         (4.0 * std::sqrt(nd) * c * l1 + 5.0 * nd * c * c * log_term) / (4.0 * (1.0 - sigma2) * root_k);
}

std::vector<std::size_t> default_checkpoints(std::size_t iterations) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= iterations; k *= 10) out.push_back(k);
  return out;
}

bool BoundReport::consensus_satisfied() const {
  return std::all_of(consensus.begin(), consensus.end(), [](const BoundRow& r) { return r.satisfied; });
}
bool BoundReport::weighted_satisfied() const {
  return std::all_of(weighted.begin(), weighted.end(), [](const BoundRow& r) { return r.satisfied; });
}
bool BoundReport::rate_satisfied() const {
  return std::all_of(rate.begin(), rate.end(), [](const BoundRow& r) { return r.satisfied; });
}
bool BoundReport::satisfied() const {
  return consensus_satisfied() && weighted_satisfied() && rate_satisfied() && gap_nonnegative();
}

double BoundReport::worst_slack(const std::vector<BoundRow>& rows) const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) w = std::min(w, r.slack);
  return w;
}

namespace {

BoundRow make_row(std::size_t k, double observed, double bound) {
  return {k, observed, bound, bound - observed, observed <= bound};
}

}  // namespace

BoundReport check_bounds(const RunTrace& trace, std::span<const LocalProblem> problems, const WeightMatrix& a,
                         double lamstar, std::span<const std::size_t> checkpoints) {
  const std::size_t n = trace.n;
  if (problems.size() != n || a.size() != n) throw InvalidArgument("check_bounds: dimension mismatch");
  if (trace.alpha.size() != trace.iterations) throw InvalidArgument("check_bounds: trace has no step-size record");
  require_normalized(trace.schedule);
  for (std::size_t k = 0; k < trace.alpha.size(); ++k) {
    if (trace.alpha[k] != trace.schedule(k))
      throw HypothesisViolation("recorded alpha(" + std::to_string(k) + ") does not match schedule " +
                                trace.schedule.describe());
    if (k > 0 && trace.alpha[k] > trace.alpha[k - 1])
      throw HypothesisViolation("step size increases at k=" + std::to_string(k));
  }

  BoundReport rep;
  rep.n = n;
  rep.sigma2 = a.sigma2();
  rep.c = global_subgradient_bound(problems);
  rep.lamstar = lamstar;
  rep.schedule = trace.schedule.describe();
  require_sigma(rep.sigma2);
  auto lam0 = trace.lambda_row(0);
  for (double l : lam0) rep.lam0_l1 += std::abs(l);

  // The geometric sum obeys S(k) = σ₂·S(k−1) + α(k−1); long double keeps it
  // in step with consensus_error_bound's direct summation.
  using LD = long double;
  const LD sqrt_nc = std::sqrt(static_cast<LD>(n)) * static_cast<LD>(rep.c);
  LD geo_sum = 0.0L;
  LD sigma_pow = 1.0L;
  rep.consensus.reserve(trace.rows());
  for (std::size_t k = 0; k < trace.rows(); ++k) {
    if (k > 0) {
      geo_sum = static_cast<LD>(rep.sigma2) * geo_sum + static_cast<LD>(trace.alpha[k - 1]);
      sigma_pow *= static_cast<LD>(rep.sigma2);
    }
    const double bound = static_cast<double>(sigma_pow * static_cast<LD>(rep.lam0_l1) + sqrt_nc * geo_sum);
    rep.consensus.push_back(make_row(k, trace.spread[k], bound));
  }

  if (!trace.schedule.is_recip_sqrt()) return rep;
  rep.rate_checked = true;
  rep.min_dual_gap = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> cps(checkpoints.begin(), checkpoints.end());
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

  const double q_star = dual_sum(problems, lamstar);
  std::vector<double> wsum(n, 0.0), dev_sum(n, 0.0);
  double asum = 0.0;
  // At checkpoint K the averages cover rows 0..K-1, the same window the
  // agents' accumulators hold after K rounds.
  std::size_t next = 0;
  while (next < cps.size() && cps[next] == 0) ++next;
  for (std::size_t k = 0; k < trace.rows() && next < cps.size(); ++k) {
    if (cps[next] == k) {
      double worst_gap = -std::numeric_limits<double>::infinity();
      double worst_dev = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double gap = dual_sum(problems, wsum[i] / asum) - q_star;
        worst_gap = std::max(worst_gap, gap);
        rep.min_dual_gap = std::min(rep.min_dual_gap, gap);
        worst_dev = std::max(worst_dev, dev_sum[i]);
      }
      rep.rate.push_back(make_row(k, worst_gap, rate_bound(k, n, rep.sigma2, rep.c, lam0, lamstar)));
      rep.weighted.push_back(
          make_row(k, worst_dev, weighted_consensus_bound(k, trace.schedule, rep.sigma2, rep.lam0_l1, rep.c, n)));
      ++next;
    }
    if (k == trace.iterations) break;
    const double alpha = trace.alpha[k];
    const double mean = trace.lambda_mean(k);
    auto lam = trace.lambda_row(k);
    for (std::size_t i = 0; i < n; ++i) {
      wsum[i] += alpha * lam[i];
      dev_sum[i] += alpha * std::abs(lam[i] - mean);
    }
    asum += alpha;
  }
  if (next < cps.size())
    throw InvalidArgument("checkpoint " + std::to_string(cps[next]) + " exceeds the trace length " +
                          std::to_string(trace.iterations));
  return rep;
}

BoundReport check_bounds(const RunTrace& trace, std::span<const LocalProblem> problems, const WeightMatrix& a,
                         double lamstar) {
  const auto cps = default_checkpoints(trace.iterations);
  return check_bounds(trace, problems, a, lamstar, cps);
}

void write_bound_rows_csv(const std::vector<BoundRow>& rows, std::ostream& os) {
  os << "k,observed,bound,slack,satisfied\n";
  for (const auto& r : rows)
    os << r.k << ',' << format_real(r.observed) << ',' << format_real(r.bound) << ',' << format_real(r.slack) << ','
       << (r.satisfied ? "true" : "false") << '\n';
}

std::string summary_json(const BoundReport& r) {
  auto finite_or_null = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["sigma2"] = r.sigma2;
  j["C"] = r.c;
  j["lam0_l1"] = r.lam0_l1;
  j["lamstar"] = r.lamstar;
  j["schedule"] = r.schedule;
  j["worst_consensus_slack"] = finite_or_null(r.worst_slack(r.consensus));
  j["consensus_satisfied"] = r.consensus_satisfied();
  j["rate_checked"] = r.rate_checked;
  if (r.rate_checked) {
    j["worst_weighted_slack"] = finite_or_null(r.worst_slack(r.weighted));
    j["worst_rate_slack"] = finite_or_null(r.worst_slack(r.rate));
    j["min_dual_gap"] = finite_or_null(r.min_dual_gap);
  }
  j["satisfied"] = r.satisfied();
  return j.dump();
}

}  // namespace dlm
