#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlm/errors.hpp"
#include "dlm/objectives.hpp"
#include "dlm/rng.hpp"

using namespace dlm;

namespace {

LocalProblem gen1(double share = 60.0) { return {Quadratic{0.04, 2.0, 0.0}, FeasibleInterval(0, 80), share}; }

// Grid minimizer of f(x) + v x over the interval, used as an oracle.
double grid_argmin(const LocalProblem& p, double v, int points = 80001) {
  double best_x = p.interval.lo;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    double x = p.interval.lo + (p.interval.hi - p.interval.lo) * i / (points - 1);
    double val = evaluate(p.cost, x) + v * x;
    if (val < best) {
      best = val;
      best_x = x;
    }
  }
  return best_x;
}

LocalProblem random_problem(Rng& rng) {
  double lo = rng.uniform(-20, 10);
  double hi = lo + rng.uniform(0, 30);
  double share = rng.uniform(lo - 5, hi + 5);
  if (rng.unit() < 0.2)
    return {Quadratic{0.0, rng.uniform(-3, 3), rng.uniform(-1, 1)}, FeasibleInterval(lo, hi), share};
  return {Quadratic{rng.uniform(0.01, 2), rng.uniform(-5, 5), rng.uniform(-1, 1)}, FeasibleInterval(lo, hi), share};
}

}  // namespace

TEST_CASE("interval and problem validation") {
  CHECK_THROWS_AS(FeasibleInterval(1, 0), InvalidArgument);
  CHECK_THROWS_AS(FeasibleInterval(0, std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK_THROWS_AS(FeasibleInterval(std::nan(""), 1), InvalidArgument);
  CHECK_THROWS_AS(LocalProblem(Quadratic{-0.1, 0, 0}, FeasibleInterval(0, 1), 0), InvalidArgument);
  CHECK_THROWS_AS(LocalProblem(Quadratic{0.1, 0, 0}, FeasibleInterval(0, 1), std::nan("")), InvalidArgument);
  CHECK_NOTHROW(LocalProblem(Quadratic{0.1, 0, 0}, FeasibleInterval(2, 2), 2));
}

TEST_CASE("primal_argmin on the first IEEE-14 generator") {
  auto p = gen1();
  CHECK(primal_argmin(p, -4.0) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(primal_argmin(p, -2.0) == 0.0);
  CHECK(primal_argmin(p, -10.0) == 80.0);
  CHECK(std::abs(grid_argmin(p, -4.0) - 25.0) <= 1e-3);
  CHECK(grid_argmin(p, -10.0) == 80.0);
}

TEST_CASE("linear costs take the lowest minimizer") {
  LocalProblem p(Quadratic{0.0, 3.0, 0.0}, FeasibleInterval(-1, 5), 0);
  CHECK(primal_argmin(p, -3.0) == -1.0);
  CHECK(primal_argmin(p, -3.5) == 5.0);
  CHECK(primal_argmin(p, 0.0) == -1.0);
}

TEST_CASE("dual_value examples") {
  LocalProblem half(Quadratic{0.5, 0, 0}, FeasibleInterval(-1, 1), 0);
  CHECK(dual_value(half, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  // lam = 0 gives x̂ = 0 = b and f(0) = 0.
  CHECK(dual_value(half, 0.0) == 0.0);
  CHECK(dual_value(gen1(60), 0.0) == 0.0);
  // mu carries through.
  LocalProblem offset(Quadratic{0.5, 0, 7}, FeasibleInterval(-1, 1), 0);
  CHECK(dual_value(offset, 1.0) == doctest::Approx(-6.5).epsilon(1e-15));
}

TEST_CASE("dual_subgradient and subgradient_bound examples") {
  auto p = gen1(60);
  CHECK(dual_subgradient(p, -4.0) == doctest::Approx(35.0).epsilon(1e-15));
  CHECK(dual_subgradient(p, -10.0) == -20.0);
  LocalProblem at_b(Quadratic{0.5, 0, 0}, FeasibleInterval(-10, 10), 2);
  CHECK(dual_subgradient(at_b, -2.0) == 0.0);

  CHECK(subgradient_bound(gen1(60)) == 60.0);
  CHECK(subgradient_bound(gen1(40)) == 40.0);
  CHECK(subgradient_bound(LocalProblem(Quadratic{1, 0, 0}, FeasibleInterval(3, 3), 3)) == 0.0);
}

TEST_CASE("generic convex costs") {
  GenericConvex f{[](double x) { return std::cosh(x - 1.0); }, {}};
  LocalProblem p(f, FeasibleInterval(-3, 4), 0.5);
  // argmin of cosh(x-1) + v x is 1 + asinh(-v). Comparing function values
  // pins an interior minimizer only to about sqrt(machine epsilon).
  for (double v : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    double expect = std::clamp(1.0 + std::asinh(-v), -3.0, 4.0);
    CHECK(std::abs(primal_argmin(p, v) - expect) <= 5e-8);
  }
  CHECK(primal_argmin(p, 50.0) == -3.0);
  CHECK(primal_argmin(p, -50.0) == 4.0);
  // Repeated calls are bitwise identical.
  CHECK(primal_argmin(p, 0.3) == primal_argmin(p, 0.3));

  GenericConvex exact{[](double x) { return x * x; }, [](double c, double lo, double hi) {
                        return std::clamp(-c / 2.0, lo, hi);
                      }};
  LocalProblem q(exact, FeasibleInterval(-1, 1), 0);
  CHECK(primal_argmin(q, 1.0) == -0.5);
  CHECK(dual_value(q, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("golden_section_min") {
  CHECK(std::abs(golden_section_min([](double x) { return (x - 0.3) * (x - 0.3); }, -1, 1) - 0.3) <= 1e-9);
  CHECK(golden_section_min([](double x) { return x; }, 2, 5) == 2.0);
  CHECK(golden_section_min([](double) { return 1.0; }, 2, 5) == 2.0);
  CHECK(golden_section_min([](double x) { return -x; }, 2, 5) == 5.0);
}

TEST_CASE("argmin properties over random problems") {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_problem(rng);
    double v = rng.uniform(-20, 20);
    double xh = primal_argmin(p, v);
    REQUIRE(p.interval.contains(xh));
    double best = evaluate(p.cost, xh) + v * xh;
    for (int s = 0; s < 100; ++s) {
      double x = rng.uniform(p.interval.lo, p.interval.hi);
      REQUIRE(best <= evaluate(p.cost, x) + v * x + 1e-9);
    }
    CHECK(std::abs(dual_subgradient(p, v)) <= subgradient_bound(p));
  }
}

TEST_CASE("dual function convexity and subgradient inequality") {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_problem(rng);
    double l1 = rng.uniform(-20, 20), l2 = rng.uniform(-20, 20), t = rng.unit();
    double scale = 1.0 + std::abs(dual_value(p, l1)) + std::abs(dual_value(p, l2));
    CHECK(dual_value(p, t * l1 + (1 - t) * l2) <= t * dual_value(p, l1) + (1 - t) * dual_value(p, l2) + 1e-9 * scale);
    CHECK(dual_value(p, l1) >= dual_value(p, l2) + dual_subgradient(p, l2) * (l1 - l2) - 1e-9 * scale);
  }
}
