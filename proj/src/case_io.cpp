#include "dlm/case_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "dlm/errors.hpp"
#include "dlm/rng.hpp"

namespace dlm {

namespace {

constexpr std::string_view kHeader = "id,bus,gamma,beta,mu,pmin,pmax";

double parse_real(std::string_view tok, std::size_t line, const char* field) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(line, std::string("malformed ") + field + " '" + std::string(tok) + "'");
  return v;
}

int parse_int(std::string_view tok, std::size_t line, const char* field) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, std::string("malformed ") + field + " '" + std::string(tok) + "'");
  return v;
}

std::string shortest(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto c = s.find(sep, pos);
    out.push_back(s.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) return out;
    pos = c + 1;
  }
}

void parse_metadata(std::string_view line, std::size_t lineno, DispatchCase& c) {
  if (!line.starts_with('#')) throw ParseError(lineno, "expected metadata line '# demand=<MW> name=<label>'");
  line.remove_prefix(1);
  bool have_demand = false;
  std::set<std::string, std::less<>> seen;
  for (auto tok : split(line, ' ')) {
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "metadata entry '" + std::string(tok) + "' is not key=value");
    auto key = tok.substr(0, eq);
    auto value = tok.substr(eq + 1);
    if (!seen.insert(std::string(key)).second) throw ParseError(lineno, "duplicate metadata key '" + std::string(key) + "'");
    if (key == "demand") {
      c.demand = parse_real(value, lineno, "demand");
      have_demand = true;
    } else if (key == "name") {
      if (value.empty()) throw ParseError(lineno, "empty case name");
      c.name = std::string(value);
    } else {
      throw ParseError(lineno, "unknown metadata key '" + std::string(key) + "'");
    }
  }
  if (!have_demand) throw ParseError(lineno, "missing demand");
}

}  // namespace

void check_case_feasible(const DispatchCase& c) {
  double lo = 0.0, hi = 0.0;
  for (const auto& g : c.generators) {
    lo += g.pmin;
    hi += g.pmax;
  }
  if (c.demand < lo || c.demand > hi)
    throw FeasibilityError("demand " + shortest(c.demand) + " MW outside [" + shortest(lo) + ", " + shortest(hi) +
                           "] for case '" + c.name + "'");
}

DispatchCase parse_case(std::string_view text) {
  DispatchCase c;
  std::size_t lineno = 0;
  int stage = 0;  // 0: metadata, 1: header, 2: rows
  std::set<int> ids;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (line.empty()) continue;
    if (stage == 0) {
      parse_metadata(line, lineno, c);
      stage = 1;
      continue;
    }
    if (stage == 1) {
      if (line != kHeader) throw ParseError(lineno, "expected header '" + std::string(kHeader) + "'");
      stage = 2;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 7) throw ParseError(lineno, "expected 7 fields, got " + std::to_string(f.size()));
    GeneratorRecord g;
    g.id = parse_int(f[0], lineno, "id");
    g.bus = parse_int(f[1], lineno, "bus");
    g.gamma = parse_real(f[2], lineno, "gamma");
    g.beta = parse_real(f[3], lineno, "beta");
    g.mu = parse_real(f[4], lineno, "mu");
    g.pmin = parse_real(f[5], lineno, "pmin");
    g.pmax = parse_real(f[6], lineno, "pmax");
    if (g.gamma < 0.0) throw ParseError(lineno, "gamma must be >= 0 for a convex cost");
    if (g.pmin > g.pmax) throw ParseError(lineno, "pmin exceeds pmax");
    if (!ids.insert(g.id).second) throw ParseError(lineno, "duplicate generator id " + std::to_string(g.id));
    c.generators.push_back(g);
  }
  if (stage == 0) throw ParseError(lineno, "missing metadata line");
  if (stage == 1) throw ParseError(lineno, "missing header line");
  check_case_feasible(c);
  return c;
}

std::string serialize_case(const DispatchCase& c) {
  std::string out = "# demand=" + shortest(c.demand) + " name=" + c.name + "\n";
  out += kHeader;
  out += '\n';
  for (const auto& g : c.generators) {
    out += std::to_string(g.id) + ',' + std::to_string(g.bus) + ',' + shortest(g.gamma) + ',' + shortest(g.beta) + ',' +
           shortest(g.mu) + ',' + shortest(g.pmin) + ',' + shortest(g.pmax) + '\n';
  }
  return out;
}

DispatchCase builtin_ieee14() {
  DispatchCase c;
  c.name = "ieee14";
  c.demand = 300.0;
  c.generators = {
      {1, 1, 0.04, 2.0, 0.0, 0.0, 80.0},  {2, 2, 0.03, 3.0, 0.0, 0.0, 90.0}, {3, 3, 0.035, 4.0, 0.0, 0.0, 70.0},
      {4, 6, 0.03, 4.0, 0.0, 0.0, 70.0},  {5, 8, 0.04, 2.5, 0.0, 0.0, 80.0},
  };
  return c;
}

std::vector<Edge> ieee14_bus_lines() {
  return {{1, 2},  {1, 5},  {2, 3},  {2, 4},  {2, 5},   {3, 4},   {4, 5},   {4, 7},   {4, 9},   {5, 6},
          {6, 11}, {6, 12}, {6, 13}, {7, 8},  {7, 9},   {9, 10},  {9, 14},  {10, 11}, {12, 13}, {13, 14}};
}

DispatchCase synth_ieee118_style(std::uint64_t seed, int n_gen) {
  if (n_gen < 1) throw InvalidArgument("synth_ieee118_style needs n_gen >= 1");
  const int n_bus = std::max(118, n_gen);
  constexpr int kMaxAttempts = 100;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    DispatchCase c;
    c.name = "synth118-" + std::to_string(seed);
    c.demand = 6000.0 * static_cast<double>(n_gen) / 54.0;

    std::vector<int> buses(static_cast<std::size_t>(n_bus));
    std::iota(buses.begin(), buses.end(), 1);
    for (int i = 0; i < n_gen; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n_bus - i));
      std::swap(buses[static_cast<std::size_t>(i)], buses[j]);
    }
    buses.resize(static_cast<std::size_t>(n_gen));
    std::sort(buses.begin(), buses.end());

    for (int i = 0; i < n_gen; ++i) {
      GeneratorRecord g;
      g.id = i + 1;
      g.bus = buses[static_cast<std::size_t>(i)];
      g.gamma = rng.uniform(0.0024, 0.0697);
      g.beta = rng.uniform(8.3391, 37.6968);
      g.mu = rng.uniform(6.78, 74.33);
      g.pmin = rng.uniform(5.0, 150.0);
      g.pmax = rng.uniform(150.0, 400.0);
      c.generators.push_back(g);
    }
    try {
      check_case_feasible(c);
      return c;
    } catch (const FeasibilityError&) {
    }
  }
  throw FeasibilityError("could not sample a feasible case in " + std::to_string(kMaxAttempts) + " attempts (seed " +
                         std::to_string(seed) + ")");
}

std::vector<Edge> synth_bus_network(std::uint64_t seed, int n_bus) {
  if (n_bus < 2) throw InvalidArgument("synth_bus_network needs at least 2 buses");
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto n = static_cast<std::size_t>(n_bus);
  const auto target = static_cast<std::size_t>(std::lround(186.0 / 118.0 * static_cast<double>(n_bus)));
  std::set<Edge> lines;
  for (std::size_t b = 1; b < n; ++b) lines.insert({b, b + 1});
  std::size_t attempts = 0;
  while (lines.size() < target && attempts++ < 100 * target) {
    const std::size_t from = 1 + rng.below(n);
    const std::size_t to = from + 2 + rng.below(7);
    if (to <= n) lines.insert({from, to});
  }
  return {lines.begin(), lines.end()};
}

GraphTopology bus_derived_graph(const DispatchCase& c, const std::vector<Edge>& bus_lines) {
  std::map<std::size_t, std::vector<std::size_t>> adj;
  for (const auto& [a, b] : bus_lines) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<std::size_t, std::vector<std::size_t>> gens_at;
  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    const auto bus = static_cast<std::size_t>(c.generators[i].bus);
    if (!adj.contains(bus))
      throw GraphError("generator " + std::to_string(c.generators[i].id) + " sits on bus " + std::to_string(bus) +
                       " which has no lines");
    gens_at[bus].push_back(i);
  }

  std::set<Edge> edges;
  for (const auto& [start, here] : gens_at) {
    for (std::size_t a = 0; a < here.size(); ++a)
      for (std::size_t b = a + 1; b < here.size(); ++b) edges.insert({here[a], here[b]});

    // Expand through generator-free buses only.
    std::set<std::size_t> seen{start};
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t w : adj[u]) {
        if (!seen.insert(w).second) continue;
        if (auto it = gens_at.find(w); it != gens_at.end()) {
          for (std::size_t gi : here)
            for (std::size_t gj : it->second) edges.insert({std::min(gi, gj), std::max(gi, gj)});
        } else {
          queue.push_back(w);
        }
      }
    }
  }
  GraphTopology g(c.generators.size(), {edges.begin(), edges.end()});
  if (!check_connected(g)) throw GraphError("bus-derived generator graph is not connected");
  return g;
}

GraphTopology generator_cycle(const DispatchCase& c) {
  const std::size_t n = c.generators.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return c.generators[a].id < c.generators[b].id; });
  std::vector<Edge> e;
  for (std::size_t k = 0; k + 1 < n; ++k) e.emplace_back(order[k], order[k + 1]);
  if (n > 2) e.emplace_back(order[n - 1], order[0]);
  return GraphTopology(n, std::move(e));
}

std::vector<LocalProblem> to_problems(const DispatchCase& c, const ShareSplit& split) {
  const std::size_t n = c.generators.size();
  std::vector<double> shares(n);
  if (std::holds_alternative<EqualShares>(split)) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      shares[i] = c.demand / static_cast<double>(n);
      acc += shares[i];
    }
    if (n > 0) shares[n - 1] = c.demand - acc;
  } else {
    const auto& given = std::get<ExplicitShares>(split).shares;
    if (given.size() != n)
      throw InvalidArgument("expected " + std::to_string(n) + " shares, got " + std::to_string(given.size()));
    double acc = 0.0;
    for (double s : given) acc += s;
    if (std::abs(acc - c.demand) > 1e-9)
      throw InvalidArgument("shares sum to " + shortest(acc) + ", demand is " + shortest(c.demand));
    shares = given;
  }
  std::vector<LocalProblem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = c.generators[i];
    out.emplace_back(Quadratic{g.gamma, g.beta, g.mu}, FeasibleInterval(g.pmin, g.pmax), shares[i]);
  }
  return out;
}

}  // namespace dlm
