#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dlm/graph.hpp"

namespace dlm {

/// Row-major dense square matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Absolute tolerance applied to every row and column sum.
inline constexpr double kDoublyStochasticTol = 1e-9;

/// A validated doubly stochastic consensus matrix compatible with a graph.
///
/// Besides the dense entries it keeps a compressed row layout (diagonal
/// included, columns ascending) that the consensus kernels iterate over.
class WeightMatrix {
 public:
  std::size_t size() const noexcept { return dense_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return dense_(i, j); }
  const DenseMatrix& dense() const noexcept { return dense_; }
  double sigma2() const noexcept { return sigma2_; }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_index() const noexcept { return col_index_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  friend WeightMatrix validate_weight_matrix(const DenseMatrix&, const GraphTopology&, double);
  WeightMatrix() = default;

  DenseMatrix dense_;
  double sigma2_ = 0.0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_index_;
  std::vector<double> values_;
};

/// Checks shape, positive diagonal, a_ij > 0 exactly on edges, and unit row
/// and column sums within `tol`; then computes sigma2.
/// Throws WeightMatrixError naming the first offending index.
WeightMatrix validate_weight_matrix(const DenseMatrix& a, const GraphTopology& g,
                                    double tol = kDoublyStochasticTol);

/// Metropolis rule: a_ij = 1/(1+max(d_i,d_j)) on edges, a_ii = 1 - sum_j a_ij.
/// Throws GraphError for disconnected graphs.
WeightMatrix metropolis_weights(const GraphTopology& g);

/// Lazy max-degree rule: a_ij = 1/(2 d_max) on edges, a_ii = 1 - d_i/(2 d_max).
WeightMatrix max_degree_weights(const GraphTopology& g);

/// n lines of n whitespace-separated decimals.
DenseMatrix parse_weight_matrix(std::string_view text);

}  // namespace dlm
