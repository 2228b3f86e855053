#include "dlm/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "dlm/errors.hpp"
#include "dlm/spectral.hpp"

namespace dlm {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

}  // namespace

WeightMatrix validate_weight_matrix(const DenseMatrix& a, const GraphTopology& g, double tol) {
  using K = WeightMatrixError::Kind;
  const std::size_t n = g.size();
  if (a.size() != n)
    throw WeightMatrixError(K::Shape, a.size(), n,
                            "weight matrix is " + idx(a.size()) + "x" + idx(a.size()) + " but graph has " + idx(n) +
                                " nodes");

  for (std::size_t i = 0; i < n; ++i)
    if (!(a(i, i) > 0.0)) throw WeightMatrixError(K::ZeroDiagonal, i, i, "a[" + idx(i) + "][" + idx(i) + "] must be > 0");

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool edge = g.has_edge(i, j);
      if (edge && !(a(i, j) > 0.0))
        throw WeightMatrixError(K::SparsityMismatch, i, j,
                                "a[" + idx(i) + "][" + idx(j) + "] must be positive on edge (" + idx(i) + "," + idx(j) + ")");
      if (!edge && a(i, j) != 0.0)
        throw WeightMatrixError(K::SparsityMismatch, i, j,
                                "a[" + idx(i) + "][" + idx(j) + "] must be zero off the edge set");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j);
    if (std::abs(s - 1.0) > tol)
      throw WeightMatrixError(K::RowSumViolation, i, 0, "row " + idx(i) + " sums to " + std::to_string(s));
  }
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j);
    if (std::abs(s - 1.0) > tol)
      throw WeightMatrixError(K::ColSumViolation, 0, j, "column " + idx(j) + " sums to " + std::to_string(s));
  }

  WeightMatrix w;
  w.dense_ = a;
  w.row_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) == 0.0) continue;
      w.col_index_.push_back(j);
      w.values_.push_back(a(i, j));
    }
    w.row_offsets_[i + 1] = w.col_index_.size();
  }
  w.sigma2_ = sigma2(a);
  return w;
}

WeightMatrix metropolis_weights(const GraphTopology& g) {
  if (!check_connected(g)) throw GraphError("metropolis_weights: graph is not connected");
  const std::size_t n = g.size();
  DenseMatrix a(n);
  for (const auto& [i, j] : g.edges()) {
    const double w = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(i), g.degree(j))));
    a(i, j) = w;
    a(j, i) = w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j : g.neighbors(i)) off += a(i, j);
    a(i, i) = 1.0 - off;
  }
  return validate_weight_matrix(a, g);
}

WeightMatrix max_degree_weights(const GraphTopology& g) {
  if (!check_connected(g)) throw GraphError("max_degree_weights: graph is not connected");
  const std::size_t n = g.size();
  std::size_t dmax = 0;
  for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, g.degree(i));
  const double w = 1.0 / (2.0 * static_cast<double>(dmax));
  DenseMatrix a(n);
  for (const auto& [i, j] : g.edges()) {
    a(i, j) = w;
    a(j, i) = w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j : g.neighbors(i)) off += a(i, j);
    a(i, i) = 1.0 - off;
  }
  return validate_weight_matrix(a, g);
}

DenseMatrix parse_weight_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
      if (pos >= line.size()) break;
      auto end = line.find_first_of(" \t\r", pos);
      if (end == std::string_view::npos) end = line.size();
      double v = 0.0;
      auto tok = line.substr(pos, end - pos);
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(lineno, "malformed number '" + std::string(tok) + "'");
      row.push_back(v);
      pos = end;
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ParseError(i + 1, "expected " + std::to_string(n) + " entries, got " + std::to_string(rows[i].size()));
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rows[i][j];
  }
  return a;
}

}  // namespace dlm
