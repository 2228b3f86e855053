#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace dlm {

using Edge = std::pair<std::size_t, std::size_t>;

/// Static undirected communication graph on nodes 0..n-1.
///
/// Edges are stored normalized (i < j) and sorted. Construction rejects
/// n < 2, out-of-range indices, self-loops and duplicate edges. Connectivity
/// is not enforced here; see check_connected().
class GraphTopology {
 public:
  GraphTopology(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Neighbors of `i` in ascending order (i itself excluded).
  std::span<const std::size_t> neighbors(std::size_t i) const;
  std::size_t degree(std::size_t i) const { return neighbors(i).size(); }
  bool has_edge(std::size_t i, std::size_t j) const;

  static GraphTopology cycle(std::size_t n);
  static GraphTopology path(std::size_t n);
  static GraphTopology complete(std::size_t n);

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
};

bool check_connected(const GraphTopology& g);

/// Parses "i j" lines (zero-based). '#' starts a comment; blank lines are
/// ignored. With n == 0 the node count is inferred as max index + 1.
GraphTopology parse_edge_list(std::string_view text, std::size_t n = 0);

}  // namespace dlm
