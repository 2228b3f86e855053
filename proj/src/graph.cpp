#include "dlm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "dlm/errors.hpp"

namespace dlm {

GraphTopology::GraphTopology(std::size_t n, std::vector<Edge> edges) : n_(n) {
  if (n < 2) throw GraphError("graph needs at least 2 nodes, got " + std::to_string(n));
  for (auto& [i, j] : edges) {
    if (i >= n || j >= n)
      throw GraphError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range for n=" +
                       std::to_string(n));
    if (i == j) throw GraphError("self-loop at node " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw GraphError("duplicate edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) + ")");
  edges_ = std::move(edges);

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges_) {
    adjacency_[fill[i]++] = j;
    adjacency_[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

std::span<const std::size_t> GraphTopology::neighbors(std::size_t i) const {
  return {adjacency_.data() + offsets_.at(i), offsets_.at(i + 1) - offsets_.at(i)};
}

bool GraphTopology::has_edge(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || i == j) return false;
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

GraphTopology GraphTopology::cycle(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n > 2) e.emplace_back(0, n - 1);
  return GraphTopology(n, std::move(e));
}

GraphTopology GraphTopology::path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return GraphTopology(n, std::move(e));
}

GraphTopology GraphTopology::complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return GraphTopology(n, std::move(e));
}

bool check_connected(const GraphTopology& g) {
  std::vector<char> seen(g.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t w : g.neighbors(u)) {
      if (seen[w]) continue;
      seen[w] = 1;
      ++reached;
      stack.push_back(w);
    }
  }
  return reached == g.size();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

bool parse_index(std::string_view tok, std::size_t& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

}  // namespace

GraphTopology parse_edge_list(std::string_view text, std::size_t n) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) throw ParseError(lineno, "expected two node indices");
    auto a = trim(line.substr(0, sp));
    auto b = trim(line.substr(sp));
    std::size_t i = 0, j = 0;
    if (!parse_index(a, i) || !parse_index(b, j))
      throw ParseError(lineno, "malformed edge '" + std::string(line) + "'");
    max_index = std::max({max_index, i, j});
    edges.emplace_back(i, j);
  }
  if (n == 0) n = edges.empty() ? 0 : max_index + 1;
  return GraphTopology(n, std::move(edges));
}

}  // namespace dlm
