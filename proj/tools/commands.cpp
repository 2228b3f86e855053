#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#ifdef DLM_HAVE_OPENMP
#include <omp.h>
#endif

#include "dlm/bounds.hpp"
#include "dlm/errors.hpp"
#include "dlm/oracle.hpp"
#include "dlm/schedule.hpp"
#include "dlm/simulator.hpp"
#include "dlm/trace_io.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;

namespace dlm::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
T parse_number(std::string_view tok, const std::string& what) {
  T v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
    throw InvalidArgument("bad " + what + " '" + std::string(tok) + "'");
  return v;
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

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << content;
  if (!os) throw IoError("write failed for " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

// Settings shared by run and bounds.
struct Setup {
  std::string case_spec = "builtin:ieee14";
  std::string graph = "cycle";
  std::string bus_lines;
  std::string weights = "metropolis";
  std::string schedule = "recipsqrt";
  std::string split = "equal";
};

ShareSplit parse_split(std::string_view spec) {
  if (spec == "equal") return EqualShares{};
  ExplicitShares s;
  for (auto tok : split(spec, ',')) s.shares.push_back(parse_number<double>(tok, "share"));
  return s;
}

std::vector<std::size_t> parse_checkpoints(std::string_view spec, std::size_t iters) {
  std::vector<std::size_t> cps;
  if (spec.empty()) {
    for (std::size_t k : {std::size_t{1}, std::size_t{10}, std::size_t{100}, std::size_t{1000}, iters})
      if (k <= iters) cps.push_back(k);
  } else {
    for (auto tok : split(spec, ',')) {
      auto k = parse_number<std::size_t>(tok, "checkpoint");
      if (k < 1 || k > iters)
        throw InvalidArgument("checkpoint " + std::to_string(k) + " outside [1, " + std::to_string(iters) + "]");
      cps.push_back(k);
    }
  }
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

struct Loaded {
  DispatchCase dcase;
  std::vector<LocalProblem> problems;
  GraphTopology graph;
  WeightMatrix weights;
  StepSchedule schedule;
};

Loaded load(const Setup& s) {
  auto c = load_case(s.case_spec);
  auto problems = to_problems(c, parse_split(s.split));
  std::vector<Edge> lines;
  if (s.graph == "bus-derived") lines = load_bus_lines(s.bus_lines, s.case_spec);
  auto g = build_graph(s.graph, c, lines);
  auto w = build_weights(s.weights, g);
  return {std::move(c), std::move(problems), std::move(g), std::move(w), parse_schedule(s.schedule)};
}

nlohmann::ordered_json setup_json(const Setup& s, std::size_t iters) {
  nlohmann::ordered_json j;
  j["case"] = s.case_spec;
  j["graph"] = s.graph;
  j["bus_lines"] = s.bus_lines;
  j["weights"] = s.weights;
  j["schedule"] = s.schedule;
  j["split"] = s.split;
  j["iters"] = iters;
  return j;
}

std::string oracle_csv(const DispatchCase& c, const OracleSolution& sol) {
  std::string out = "# f_star=" + format_real(sol.f_star) + " lam_star=" + format_real(sol.lam_star) +
                    " residual=" + format_real(sol.residual) + "\nid,x_star\n";
  for (std::size_t i = 0; i < sol.x_star.size(); ++i)
    out += std::to_string(c.generators[i].id) + "," + format_real(sol.x_star[i]) + "\n";
  return out;
}

double total_cost(std::span<const LocalProblem> problems, std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i) f += evaluate(problems[i].cost, x[i]);
  return f;
}

void write_plots(const fs::path& dir, const RunTrace& t, const DispatchCase& c) {
  plot::Figure alloc{"Allocations", "k", "x_i", {}};
  plot::Figure mult{"Multipliers", "k", "lambda_i", {}};
  for (std::size_t i = 0; i < t.n; ++i) {
    plot::Series sx{"gen " + std::to_string(c.generators[i].id), {}};
    plot::Series sl{sx.label, {}};
    sx.y.reserve(t.rows());
    sl.y.reserve(t.rows());
    for (std::size_t k = 0; k < t.rows(); ++k) {
      sx.y.push_back(t.x_row(k)[i]);
      sl.y.push_back(t.lambda_row(k)[i]);
    }
    alloc.series.push_back(std::move(sx));
    mult.series.push_back(std::move(sl));
  }
  plot::Figure resid{"Primal residual", "k", "log10 |sum x - b|", {}};
  plot::Series r{"residual", {}};
  for (double v : t.residual) r.y.push_back(v == 0.0 ? -16.0 : std::max(-16.0, std::log10(std::abs(v))));
  resid.series.push_back(std::move(r));
  write_file(dir / "alloc.svg", plot::render_svg(alloc));
  write_file(dir / "multipliers.svg", plot::render_svg(mult));
  write_file(dir / "residual.svg", plot::render_svg(resid));
}

void write_bound_files(const fs::path& dir, const BoundReport& rep) {
  std::ostringstream cons, rate, weighted;
  write_bound_rows_csv(rep.consensus, cons);
  write_file(dir / "bounds.csv", cons.str());
  if (rep.rate_checked) {
    write_bound_rows_csv(rep.rate, rate);
    write_bound_rows_csv(rep.weighted, weighted);
    write_file(dir / "rate.csv", rate.str());
    write_file(dir / "weighted.csv", weighted.str());
  }
  write_file(dir / "bounds_summary.json", summary_json(rep) + "\n");
}

void print_report(std::ostream& out, const BoundReport& rep) {
  out << "bounds: sigma2=" << fmt(rep.sigma2) << " C=" << fmt(rep.c) << "\n";
  out << "  consensus: " << (rep.consensus_satisfied() ? "satisfied" : "VIOLATED")
      << " worst_slack=" << fmt(rep.worst_slack(rep.consensus)) << "\n";
  if (rep.rate_checked) {
    out << "  weighted: " << (rep.weighted_satisfied() ? "satisfied" : "VIOLATED")
        << " worst_slack=" << fmt(rep.worst_slack(rep.weighted)) << "\n";
    out << "  rate: " << (rep.rate_satisfied() ? "satisfied" : "VIOLATED")
        << " worst_slack=" << fmt(rep.worst_slack(rep.rate)) << " min_gap=" << fmt(rep.min_dual_gap) << "\n";
  } else {
    out << "  rate: skipped (needs alpha(k) = 1/sqrt(k))\n";
  }
  out << "  satisfied=" << (rep.satisfied() ? "true" : "false") << "\n";
}

void add_setup_options(CLI::App* cmd, Setup& s) {
  cmd->add_option("--case", s.case_spec, "builtin:ieee14 | synth:SEED[:N] | file:PATH | PATH");
  cmd->add_option("--graph", s.graph, "cycle | path | complete | bus-derived | edges:PATH");
  cmd->add_option("--bus-lines", s.bus_lines, "builtin:ieee14 | synth:SEED[:NBUS] | PATH (for bus-derived)");
  cmd->add_option("--weights", s.weights, "metropolis | maxdegree | file:PATH");
  cmd->add_option("--schedule", s.schedule, "recipsqrt | recip | powerlaw:C:P");
  cmd->add_option("--split", s.split, "equal | comma-separated shares");
}

struct RunArgs {
  Setup setup;
  std::size_t iters = 1000;
  std::string out = "out";
  std::string checkpoints;
  std::optional<double> lamstar;
  std::string execution = "parallel";
  int threads = 0;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  if (a.iters < 1) throw InvalidArgument("--iters must be >= 1");
  auto L = load(a.setup);
  auto cps = parse_checkpoints(a.checkpoints, a.iters);
#ifdef DLM_HAVE_OPENMP
  if (a.threads > 0) omp_set_num_threads(a.threads);
#endif
  RunOptions opts;
  opts.iterations = a.iters;
  if (a.execution == "serial")
    opts.execution = Execution::Serial;
  else if (a.execution != "parallel")
    throw InvalidArgument("unknown execution '" + a.execution + "'");

  auto trace = run_dlm(L.problems, L.weights, L.schedule, opts);
  auto sol = solve_centralized(L.problems, L.dcase.demand);
  const double lamstar = a.lamstar.value_or(sol.lam_star);

  auto dir = prepare_dir(a.out);
  std::ostringstream tr, sm;
  write_trace_csv(trace, tr);
  write_summary_csv(trace, sm);
  write_file(dir / "trace.csv", tr.str());
  write_file(dir / "summary.csv", sm.str());
  write_file(dir / "oracle.csv", oracle_csv(L.dcase, sol));
  write_file(dir / "run.json", setup_json(a.setup, a.iters).dump(2) + "\n");
  write_plots(dir, trace, L.dcase);

  const double cost = total_cost(L.problems, trace.x_row(a.iters));
  out << "case " << L.dcase.name << ": n=" << trace.n << " demand=" << fmt(L.dcase.demand) << "\n";
  out << "schedule=" << L.schedule.describe() << " iters=" << a.iters << " sigma2=" << fmt(L.weights.sigma2()) << "\n";
  out << "final: residual=" << fmt(trace.residual[a.iters]) << " cost=" << fmt(cost) << " f_star=" << fmt(sol.f_star)
      << " rel_gap=" << fmt(std::abs(cost - sol.f_star) / std::abs(sol.f_star))
      << " spread=" << fmt(trace.spread[a.iters]) << "\n";
  if (L.schedule.starts_at_one()) {
    auto rep = check_bounds(trace, L.problems, L.weights, lamstar, cps);
    write_bound_files(dir, rep);
    print_report(out, rep);
  } else {
    out << "bounds: skipped (alpha(0) = " << fmt(L.schedule(0)) << ", bounds need alpha(0) = 1)\n";
  }
  out << "wrote " << dir.string() << "\n";
  return 0;
}

struct OracleArgs {
  std::string case_spec = "builtin:ieee14";
  std::string split = "equal";
  std::optional<double> demand;
  std::string out;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  auto c = load_case(a.case_spec);
  if (a.demand) c.demand = *a.demand;
  auto problems = to_problems(c, parse_split(a.demand ? "equal" : a.split));
  auto sol = solve_centralized(problems, c.demand);
  out << "f_star=" << format_real(sol.f_star) << "\n";
  out << "lam_star=" << format_real(sol.lam_star) << "\n";
  out << "residual=" << format_real(sol.residual) << "\n";
  for (std::size_t i = 0; i < sol.x_star.size(); ++i)
    out << "x_star[" << c.generators[i].id << "]=" << format_real(sol.x_star[i]) << "\n";
  if (!a.out.empty()) {
    auto dir = prepare_dir(a.out);
    write_file(dir / "oracle.csv", oracle_csv(c, sol));
  }
  return 0;
}

struct BoundsArgs {
  Setup setup;
  std::string trace;
  std::string checkpoints;
  std::optional<double> lamstar;
  std::string out;
};

int cmd_bounds(BoundsArgs a, const CLI::App& cmd, std::ostream& out) {
  // Settings not given on the command line come from the run.json written
  // next to the trace, when there is one.
  const fs::path run_json = fs::path(a.trace).parent_path() / "run.json";
  if (fs::exists(run_json)) {
    auto j = nlohmann::json::parse(read_text_file(run_json.string()), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(1, "malformed " + run_json.string());
    auto fill = [&](const char* flag, const char* key, std::string& field) {
      if (cmd.count(flag) == 0 && j.contains(key) && j[key].is_string()) field = j[key].get<std::string>();
    };
    fill("--case", "case", a.setup.case_spec);
    fill("--graph", "graph", a.setup.graph);
    fill("--bus-lines", "bus_lines", a.setup.bus_lines);
    fill("--weights", "weights", a.setup.weights);
    fill("--schedule", "schedule", a.setup.schedule);
    fill("--split", "split", a.setup.split);
  }
  auto L = load(a.setup);
  auto trace = read_trace_csv(read_text_file(a.trace));
  if (trace.n != L.problems.size())
    throw InvalidArgument("trace has " + std::to_string(trace.n) + " nodes, case has " +
                          std::to_string(L.problems.size()));
  trace.schedule = L.schedule;
  trace.shares.clear();
  for (const auto& p : L.problems) trace.shares.push_back(p.share);
  trace.alpha.resize(trace.iterations);
  for (std::size_t k = 0; k < trace.iterations; ++k) trace.alpha[k] = L.schedule(k);
  compute_derived(trace, L.problems);

  const double lamstar = a.lamstar ? *a.lamstar : solve_centralized(L.problems, L.dcase.demand).lam_star;
  auto cps = parse_checkpoints(a.checkpoints, trace.iterations);
  auto rep = check_bounds(trace, L.problems, L.weights, lamstar, cps);
  const auto dir = prepare_dir(a.out.empty() ? fs::path(a.trace).parent_path().string() : a.out);
  write_bound_files(dir, rep);
  print_report(out, rep);
  return rep.satisfied() ? 0 : 1;
}

int cmd_case_validate(const std::string& spec, std::ostream& out) {
  auto c = load_case(spec);
  double lo = 0, hi = 0;
  for (const auto& g : c.generators) {
    lo += g.pmin;
    hi += g.pmax;
  }
  out << "ok: " << c.name << " generators=" << c.generators.size() << " demand=" << fmt(c.demand) << " capacity=["
      << fmt(lo) << ", " << fmt(hi) << "]\n";
  return 0;
}

int cmd_case_synth(std::uint64_t seed, int n, const std::string& path, std::ostream& out) {
  auto text = serialize_case(synth_ieee118_style(seed, n));
  if (path.empty() || path == "-")
    out << text;
  else
    write_file(path, text);
  return 0;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

DispatchCase load_case(std::string_view spec) {
  if (spec == "builtin:ieee14") return builtin_ieee14();
  if (spec.starts_with("builtin:")) throw InvalidArgument("unknown builtin case '" + std::string(spec) + "'");
  if (spec.starts_with("synth:")) {
    auto parts = split(spec.substr(6), ':');
    if (parts.size() > 2) throw InvalidArgument("expected synth:SEED[:N], got '" + std::string(spec) + "'");
    auto seed = parse_number<std::uint64_t>(parts[0], "seed");
    int n = parts.size() == 2 ? parse_number<int>(parts[1], "generator count") : 54;
    return synth_ieee118_style(seed, n);
  }
  std::string path(spec.starts_with("file:") ? spec.substr(5) : spec);
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(0, "cannot open case file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_case(ss.str());
}

std::vector<Edge> load_bus_lines(std::string_view spec, std::string_view case_spec) {
  if (spec.empty()) {
    if (case_spec == "builtin:ieee14") return ieee14_bus_lines();
    if (case_spec.starts_with("synth:")) spec = case_spec;
    else throw GraphError("bus-derived graph for a case file needs --bus-lines");
  }
  if (spec == "builtin:ieee14") return ieee14_bus_lines();
  if (spec.starts_with("synth:")) {
    auto parts = split(spec.substr(6), ':');
    if (parts.size() > 2) throw InvalidArgument("expected synth:SEED[:N], got '" + std::string(spec) + "'");
    auto seed = parse_number<std::uint64_t>(parts[0], "seed");
    int n = parts.size() == 2 ? parse_number<int>(parts[1], "size") : 118;
    return synth_bus_network(seed, std::max(118, n));
  }
  return parse_edge_list(read_text_file(std::string(spec))).edges();
}

GraphTopology build_graph(std::string_view spec, const DispatchCase& c, const std::vector<Edge>& bus_lines) {
  const std::size_t n = c.generators.size();
  GraphTopology g = [&] {
    if (spec == "cycle") return generator_cycle(c);
    if (spec == "path") return GraphTopology::path(n);
    if (spec == "complete") return GraphTopology::complete(n);
    if (spec == "bus-derived") return bus_derived_graph(c, bus_lines);
    if (spec.starts_with("edges:")) return parse_edge_list(read_text_file(std::string(spec.substr(6))), n);
    throw InvalidArgument("unknown graph '" + std::string(spec) + "'");
  }();
  if (g.size() != n)
    throw GraphError("graph has " + std::to_string(g.size()) + " nodes, case has " + std::to_string(n) + " generators");
  if (!check_connected(g)) throw GraphError("communication graph is not connected");
  return g;
}

WeightMatrix build_weights(std::string_view spec, const GraphTopology& g) {
  if (spec == "metropolis") return metropolis_weights(g);
  if (spec == "maxdegree") return max_degree_weights(g);
  if (spec.starts_with("file:")) return validate_weight_matrix(parse_weight_matrix(read_text_file(std::string(spec.substr(5)))), g);
  throw InvalidArgument("unknown weights '" + std::string(spec) + "'");
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed Lagrangian method for resource allocation over networks", "dlm"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate the method and write traces, oracle, bounds and plots");
  add_setup_options(run_cmd, run.setup);
  run_cmd->add_option("--iters", run.iters, "Number of rounds")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--checkpoints", run.checkpoints, "Comma-separated K values (default 1,10,100,1000,iters)");
  run_cmd->add_option("--lamstar", run.lamstar, "Optimal multiplier (default: from the oracle)");
  run_cmd->add_option("--execution", run.execution, "parallel | serial");
  run_cmd->add_option("--threads", run.threads, "OpenMP threads (0 keeps the runtime default)");

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve the dispatch problem centrally");
  oracle_cmd->add_option("--case", orc.case_spec, "builtin:ieee14 | synth:SEED[:N] | file:PATH | PATH");
  oracle_cmd->add_option("--split", orc.split, "equal | comma-separated shares");
  oracle_cmd->add_option("--demand", orc.demand, "Override the case demand (MW)");
  oracle_cmd->add_option("--out", orc.out, "Directory for oracle.csv");

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Check a recorded trace against the analytical bounds");
  add_setup_options(bounds_cmd, bnd.setup);
  bounds_cmd->add_option("--trace", bnd.trace, "trace.csv written by run")->required();
  bounds_cmd->add_option("--checkpoints", bnd.checkpoints, "Comma-separated K values");
  bounds_cmd->add_option("--lamstar", bnd.lamstar, "Optimal multiplier (default: from the oracle)");
  bounds_cmd->add_option("--out", bnd.out, "Output directory (default: the trace's directory)");

  auto* case_cmd = app.add_subcommand("case", "Case file utilities");
  case_cmd->require_subcommand(1);
  std::string validate_spec;
  auto* validate_cmd = case_cmd->add_subcommand("validate", "Parse and check a case");
  validate_cmd->add_option("case", validate_spec, "Case spec or path")->required();
  std::uint64_t seed = 7;
  int n_gen = 54;
  std::string synth_out;
  auto* synth_cmd = case_cmd->add_subcommand("synth", "Write a synthesized case");
  synth_cmd->add_option("--seed", seed, "Random seed");
  synth_cmd->add_option("--n", n_gen, "Generator count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth_out, "Output file (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*oracle_cmd) return cmd_oracle(orc, out);
    if (*bounds_cmd) return cmd_bounds(bnd, *bounds_cmd, out);
    if (*validate_cmd) return cmd_case_validate(validate_spec, out);
    if (*synth_cmd) return cmd_case_synth(seed, n_gen, synth_out, out);
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: InternalError: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dlm::cli
