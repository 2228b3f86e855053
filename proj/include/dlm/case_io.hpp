#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dlm/graph.hpp"
#include "dlm/objectives.hpp"

namespace dlm {

/// One generator: cost gamma·P² + beta·P + mu on [pmin, pmax] (MW).
struct GeneratorRecord {
  int id = 0;
  int bus = 0;
  double gamma = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double pmin = 0.0;
  double pmax = 0.0;

  bool operator==(const GeneratorRecord&) const = default;
};

struct DispatchCase {
  std::vector<GeneratorRecord> generators;
  double demand = 0.0;  // MW
  std::string name = "case";

  bool operator==(const DispatchCase&) const = default;
};

/// Case file:
///
///   # demand=<MW> name=<label>
///   id,bus,gamma,beta,mu,pmin,pmax
///   1,1,0.04,2.0,0.0,0.0,80
///   ...
///
/// Strict: unknown metadata keys, wrong field counts, malformed numbers,
/// gamma < 0, pmin > pmax and duplicate ids are ParseErrors with line
/// numbers. Demand outside [Σpmin, Σpmax] is a FeasibilityError.
DispatchCase parse_case(std::string_view text);

/// Canonical text form (shortest round-trip decimals).
std::string serialize_case(const DispatchCase& c);

/// Throws FeasibilityError when demand lies outside [Σpmin, Σpmax].
void check_case_feasible(const DispatchCase& c);

/// Five-generator IEEE-14 dispatch case, demand 300 MW.
DispatchCase builtin_ieee14();

/// The 20 branches of the IEEE 14-bus network (1-based bus numbers).
std::vector<Edge> ieee14_bus_lines();

/// Deterministic case with coefficients uniform in the IEEE-118 ranges:
/// gamma in [0.0024, 0.0697], beta in [8.3391, 37.6968], mu in [6.78, 74.33],
/// pmin in [5, 150], pmax in [150, 400]; demand 6000·n_gen/54 MW.
/// Generators sit on distinct buses of a max(118, n_gen)-bus network.
DispatchCase synth_ieee118_style(std::uint64_t seed, int n_gen = 54);

/// Synthetic meshed bus network for synthesized cases: a chain over buses
/// 1..n_bus plus short chords (i, i+d), d in [2, 8], for 186/118 lines per bus.
std::vector<Edge> synth_bus_network(std::uint64_t seed, int n_bus = 118);

/// Generators i and j are adjacent when some bus path between their buses
/// passes through no other generator's bus. Node order follows the case.
GraphTopology bus_derived_graph(const DispatchCase& c, const std::vector<Edge>& bus_lines);

/// Cycle over the generators in ascending id order.
GraphTopology generator_cycle(const DispatchCase& c);

struct EqualShares {};
struct ExplicitShares {
  std::vector<double> shares;
};
using ShareSplit = std::variant<EqualShares, ExplicitShares>;

/// One LocalProblem per generator with interval [pmin, pmax]. Equal split
/// gives b/n to every node except the last, which takes the remainder so
/// Σb_i == demand exactly. Explicit shares must sum to demand within 1e-9.
std::vector<LocalProblem> to_problems(const DispatchCase& c, const ShareSplit& split = EqualShares{});

}  // namespace dlm
