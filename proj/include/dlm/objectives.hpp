#pragma once

#include <functional>
#include <variant>

namespace dlm {

/// Box X_i = [lo, hi]; both ends finite, lo <= hi.
struct FeasibleInterval {
  double lo = 0.0;
  double hi = 0.0;

  FeasibleInterval() = default;
  FeasibleInterval(double lo_, double hi_);

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  double midpoint() const { return lo + 0.5 * (hi - lo); }
};

/// f(x) = gamma x² + beta x + mu with gamma >= 0.
struct Quadratic {
  double gamma = 0.0;
  double beta = 0.0;
  double mu = 0.0;
};

/// Any convex f given by a value oracle. `argmin`, when set, must return a
/// minimizer of f(x) + c·x over [lo, hi] (lowest one on ties) and be pure;
/// otherwise golden-section search is used.
struct GenericConvex {
  std::function<double(double)> value;
  std::function<double(double c, double lo, double hi)> argmin;
};

using CostFunction = std::variant<Quadratic, GenericConvex>;

double evaluate(const CostFunction& f, double x);

/// Per-node data: cost f_i, interval X_i and resource share b_i.
struct LocalProblem {
  CostFunction cost;
  FeasibleInterval interval;
  double share = 0.0;

  LocalProblem(CostFunction cost_, FeasibleInterval interval_, double share_);
};

/// Tolerance of the default golden-section argmin.
inline constexpr double kGoldenSectionTol = 1e-10;

/// argmin over X_i of f_i(x) + v·(x − b_i). Quadratic with gamma > 0 uses the
/// closed form clamp((−v − beta)/(2 gamma)); a linear cost with v = −beta
/// returns lo.
double primal_argmin(const LocalProblem& p, double v);

/// q_i(lam) = −[f_i(x̂) + lam·(x̂ − b_i)] with x̂ = primal_argmin(p, lam).
double dual_value(const LocalProblem& p, double lam);

/// b_i − primal_argmin(p, v), an element of ∂q_i(v).
double dual_subgradient(const LocalProblem& p, double v);

/// max(|b_i − lo|, |b_i − hi|).
double subgradient_bound(const LocalProblem& p);

/// Golden-section minimizer of g on [lo, hi] to absolute tolerance `tol`.
double golden_section_min(const std::function<double(double)>& g, double lo, double hi,
                          double tol = kGoldenSectionTol);

}  // namespace dlm
