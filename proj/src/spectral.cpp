#include "dlm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dlm/errors.hpp"

namespace dlm {

std::vector<double> singular_values_jacobi(const DenseMatrix& a) {
  const std::size_t n = a.size();
  // Column-major working copy; rotations act on column pairs.
  std::vector<double> u(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u[j * n + i] = a(i, j);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* cp = &u[p * n];
        double* cq = &u[q * n];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += cp[i] * cp[i];
          beta += cq[i] * cq[i];
          gamma += cp[i] * cq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = cp[i];
          const double y = cq[i];
          cp[i] = c * x - s * y;
          cq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += u[j * n + i] * u[j * n + i];
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

namespace {

void project_out_mean(std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double sigma2_power_iteration(const DenseMatrix& a, const PowerIterationOptions& opts) {
  const std::size_t n = a.size();
  if (n < 2) throw InvalidArgument("sigma2 needs n >= 2");

  // Deterministic start vector with no special structure.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(1.0 + 0.7 * static_cast<double>(i)) + 0.01 * static_cast<double>(i);
  project_out_mean(x);
  double nx = norm2(x);
  for (double& v : x) v /= nx;

  // Consensus matrices are sparse; iterate over the nonzeros only.
  struct Entry {
    std::size_t i, j;
    double v;
  };
  std::vector<Entry> nz;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0.0) nz.push_back({i, j, a(i, j)});

  std::vector<double> ax(n), y(n);
  double prev = -1.0;
  std::size_t stable = 0;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    std::fill(ax.begin(), ax.end(), 0.0);
    std::fill(y.begin(), y.end(), 0.0);
    for (const auto& e : nz) ax[e.i] += e.v * x[e.j];
    for (const auto& e : nz) y[e.j] += e.v * ax[e.i];
    // Rayleigh quotient of AᵀA equals ||Ax||² for unit x.
    const double rho = std::inner_product(ax.begin(), ax.end(), ax.begin(), 0.0);
    project_out_mean(y);
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;

    if (prev >= 0.0 && std::abs(rho - prev) <= opts.rel_tol * std::max(rho, std::numeric_limits<double>::min())) {
      if (++stable >= opts.stable_window) return std::sqrt(rho);
    } else {
      stable = 0;
    }
    prev = rho;
  }
  throw ConvergenceError("sigma2 power iteration did not converge in " + std::to_string(opts.max_iters) + " steps");
}

double sigma2(const DenseMatrix& a) {
  if (a.size() < 2) throw InvalidArgument("sigma2 needs n >= 2");
  if (a.size() <= kDenseSpectralLimit) return singular_values_jacobi(a)[1];
  return sigma2_power_iteration(a);
}

}  // namespace dlm
