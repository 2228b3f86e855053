#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dlm/case_io.hpp"
#include "dlm/graph.hpp"
#include "dlm/weights.hpp"

namespace dlm::cli {

/// Exit codes: 0 success, 1 bounds not satisfied, 2 any error.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "builtin:ieee14", "synth:SEED[:N]", "file:PATH" or a bare path.
DispatchCase load_case(std::string_view spec);

/// Bus lines for the bus-derived graph. An empty spec picks the network that
/// belongs to the case spec (IEEE-14 branches or the synthesized network).
std::vector<Edge> load_bus_lines(std::string_view spec, std::string_view case_spec);

/// "cycle", "path", "complete", "bus-derived" or "edges:PATH".
GraphTopology build_graph(std::string_view spec, const DispatchCase& c, const std::vector<Edge>& bus_lines);

/// "metropolis", "maxdegree" or "file:PATH".
WeightMatrix build_weights(std::string_view spec, const GraphTopology& g);

/// Whole file as a string; IoError when it cannot be read.
std::string read_text_file(const std::string& path);

}  // namespace dlm::cli
