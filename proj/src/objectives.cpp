#include "dlm/objectives.hpp"

#include <cmath>
#include <string>

#include "dlm/errors.hpp"

namespace dlm {

FeasibleInterval::FeasibleInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("interval bounds must be finite");
  if (lo > hi) throw InvalidArgument("interval lo " + std::to_string(lo) + " exceeds hi " + std::to_string(hi));
}

LocalProblem::LocalProblem(CostFunction cost_, FeasibleInterval interval_, double share_)
    : cost(std::move(cost_)), interval(interval_), share(share_) {
  if (!std::isfinite(share)) throw InvalidArgument("resource share must be finite");
  if (const auto* q = std::get_if<Quadratic>(&cost)) {
    if (!(q->gamma >= 0.0) || !std::isfinite(q->gamma) || !std::isfinite(q->beta) || !std::isfinite(q->mu))
      throw InvalidArgument("quadratic cost needs finite coefficients with gamma >= 0");
  } else if (!std::get<GenericConvex>(cost).value) {
    throw InvalidArgument("generic cost needs a value oracle");
  }
}

double evaluate(const CostFunction& f, double x) {
  if (const auto* q = std::get_if<Quadratic>(&f)) return (q->gamma * x + q->beta) * x + q->mu;
  return std::get<GenericConvex>(f).value(x);
}

double golden_section_min(const std::function<double(double)>& g, double lo, double hi, double tol) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > tol) {
    // On ties keep the left part so plateaus resolve toward the lowest minimizer.
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  // Endpoints are candidates too: golden section never evaluates them.
  double best = 0.5 * (a + b);
  double gbest = g(best);
  if (double glo = g(lo); glo <= gbest) {
    best = lo;
    gbest = glo;
  }
  if (double ghi = g(hi); ghi < gbest) best = hi;
  return best;
}

double primal_argmin(const LocalProblem& p, double v) {
  const auto& box = p.interval;
  if (const auto* q = std::get_if<Quadratic>(&p.cost)) {
    if (q->gamma > 0.0) return box.clamp((-v - q->beta) / (2.0 * q->gamma));
    const double slope = q->beta + v;
    return slope < 0.0 ? box.hi : box.lo;
  }
  const auto& gc = std::get<GenericConvex>(p.cost);
  if (gc.argmin) return box.clamp(gc.argmin(v, box.lo, box.hi));
  if (box.lo == box.hi) return box.lo;
  return golden_section_min([&](double x) { return gc.value(x) + v * x; }, box.lo, box.hi);
}

double dual_value(const LocalProblem& p, double lam) {
  const double x = primal_argmin(p, lam);
  return -(evaluate(p.cost, x) + lam * (x - p.share));
}

double dual_subgradient(const LocalProblem& p, double v) { return p.share - primal_argmin(p, v); }

double subgradient_bound(const LocalProblem& p) {
  return std::max(std::abs(p.share - p.interval.lo), std::abs(p.share - p.interval.hi));
}

}  // namespace dlm
