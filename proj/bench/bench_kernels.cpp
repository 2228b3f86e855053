// Serial vs OpenMP timings for the per-round kernels and for whole runs.
//   bench_kernels [n ...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <vector>

#include "dlm/kernels.hpp"
#include "dlm/rng.hpp"
#include "dlm/simulator.hpp"
#include "dlm/weights.hpp"

using namespace dlm;
using Clock = std::chrono::steady_clock;

namespace {

GraphTopology ring_with_chords(Rng& rng, std::size_t n) {
  std::set<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.insert({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
  for (std::size_t c = 0; c < 2 * n; ++c) {
    std::size_t a = rng.below(n), b = rng.below(n);
    if (a != b) e.insert({std::min(a, b), std::max(a, b)});
  }
  return GraphTopology(n, {e.begin(), e.end()});
}

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(std::strtoull(argv[i], nullptr, 10));
  if (sizes.empty()) sizes = {1000, 4000};

  std::printf("threads=%d\n", kernels::max_threads());
  std::printf("%8s %14s %14s %14s %14s %12s %12s\n", "n", "cons_ser_ms", "cons_par_ms", "node_ser_ms", "node_par_ms",
              "run_ser_ms", "run_par_ms");
  for (std::size_t n : sizes) {
    Rng rng(n);
    auto g = ring_with_chords(rng, n);
    auto w = metropolis_weights(g);
    std::vector<LocalProblem> ps;
    for (std::size_t i = 0; i < n; ++i)
      ps.emplace_back(Quadratic{rng.uniform(0.02, 0.08), rng.uniform(1, 5), 0}, FeasibleInterval(0, rng.uniform(50, 100)),
                      40.0);
    std::vector<double> lam(n), v(n), x(n), next(n);
    for (auto& l : lam) l = rng.uniform(-10, 0);

    const int reps = 20;
    double cs = best_ms([&] { kernels::consensus_serial(w, lam, v); }, reps);
    double cp = best_ms([&] { kernels::consensus_parallel(w, lam, v); }, reps);
    double ns = best_ms([&] { kernels::node_update_serial(ps, v, 0.1, x, next); }, reps);
    double np = best_ms([&] { kernels::node_update_parallel(ps, v, 0.1, x, next); }, reps);

    RunOptions opts;
    opts.iterations = 200;
    opts.execution = Execution::Serial;
    double rs = best_ms([&] { run_dlm(ps, w, Recip{}, opts); }, 3);
    opts.execution = Execution::Parallel;
    double rp = best_ms([&] { run_dlm(ps, w, Recip{}, opts); }, 3);
    std::printf("%8zu %14.4f %14.4f %14.4f %14.4f %12.2f %12.2f\n", n, cs, cp, ns, np, rs, rp);
  }
  return 0;
}
