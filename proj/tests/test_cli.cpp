#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "dlm/case_io.hpp"
#include "dlm/errors.hpp"
#include "dlm/trace_io.hpp"

using namespace dlm;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::path(DLM_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) { return cli::read_text_file(p.string()); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

TEST_CASE("run on the builtin IEEE-14 case") {
  auto dir = fresh_dir("ieee14");
  auto r = cli_run({"run", "--case", "builtin:ieee14", "--graph", "cycle", "--schedule", "powerlaw:0.08:0.85", "--iters",
                    "200", "--out", dir.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* f : {"trace.csv", "summary.csv", "oracle.csv", "alloc.svg", "multipliers.svg", "residual.svg",
                        "run.json"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  // alpha(0) = 0.08, so no bound report.
  CHECK_FALSE(fs::exists(dir / "bounds.csv"));
  CHECK(r.out.find("bounds: skipped") != std::string::npos);

  auto trace = read_trace_csv(slurp(dir / "trace.csv"));
  CHECK(trace.iterations == 200);
  for (std::size_t k = 101; k <= 200; ++k) {
    double d = 0, base = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      d += std::pow(trace.x_row(k)[i] - trace.x_row(k - 1)[i], 2);
      base += std::pow(trace.x_row(k - 1)[i], 2);
    }
    CHECK(std::sqrt(d / base) < 1e-3);
  }
  auto summary = csv_rows(slurp(dir / "summary.csv"));
  CHECK(summary.size() == 202);
  CHECK(summary[0] == std::vector<std::string>{"k", "residual", "lagrangian", "spread"});
  CHECK(summary[1][2] == "nan");

  auto oracle = slurp(dir / "oracle.csv");
  CHECK(oracle.rfind("# f_star=1547.81847677", 0) == 0);
  CHECK(oracle.find("\nid,x_star\n1,66.239754098") != std::string::npos);
  auto svg = slurp(dir / "alloc.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);

  // Re-running reproduces every output byte.
  auto again = fresh_dir("ieee14_again");
  REQUIRE(cli_run({"run", "--case", "builtin:ieee14", "--graph", "cycle", "--schedule", "powerlaw:0.08:0.85", "--iters",
                   "200", "--out", again.string()})
              .code == 0);
  for (const char* f : {"trace.csv", "summary.csv", "oracle.csv", "alloc.svg", "multipliers.svg", "residual.svg"})
    CHECK_MESSAGE(slurp(dir / f) == slurp(again / f), f);
}

TEST_CASE("run on a synthesized case with the bus-derived graph") {
  auto dir = fresh_dir("synth7");
  auto r = cli_run({"run", "--case", "synth:7", "--graph", "bus-derived", "--schedule", "recip", "--iters", "5000",
                    "--out", dir.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto rows = csv_rows(slurp(dir / "summary.csv"));
  // The residual oscillates, so compare its envelope over decades.
  auto envelope = [&](std::size_t from, std::size_t to) {
    double m = 0;
    for (std::size_t k = from; k < to; ++k) m = std::max(m, std::abs(std::stod(rows[k + 1][1])));
    return m;
  };
  CHECK(envelope(1000, 5001) < envelope(100, 1000));
  CHECK(envelope(100, 1000) < envelope(10, 100));
  CHECK(envelope(10, 100) < envelope(1, 10));
  // 1/k has alpha(0) = 1: the consensus bound is reported, the rate bound is not.
  CHECK(fs::exists(dir / "bounds.csv"));
  CHECK_FALSE(fs::exists(dir / "rate.csv"));
}

TEST_CASE("errors are single machine-parsable lines") {
  auto r = cli_run({"run", "--case", "file:/nonexistent/case.csv", "--iters", "5"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ParseError: ", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

  auto bad = cli_run({"run", "--graph", "star", "--iters", "5", "--out", fresh_dir("bad").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("error: InvalidArgument: ", 0) == 0);

  auto usage = cli_run({"frobnicate"});
  CHECK(usage.code == 2);
  CHECK(usage.err.rfind("error: UsageError: ", 0) == 0);

  auto help = cli_run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("run") != std::string::npos);
}

TEST_CASE("oracle command") {
  auto r = cli_run({"oracle", "--case", "builtin:ieee14"});
  REQUIRE(r.code == 0);
  double sum = 0;
  std::istringstream is(r.out);
  std::string line;
  int count = 0;
  while (std::getline(is, line))
    if (line.rfind("x_star[", 0) == 0) {
      sum += std::stod(line.substr(line.find('=') + 1));
      ++count;
    }
  CHECK(count == 5);
  CHECK(std::abs(sum - 300) <= 1e-6);

  auto infeasible = cli_run({"oracle", "--case", "builtin:ieee14", "--demand", "400"});
  CHECK(infeasible.code == 2);
  CHECK(infeasible.err.rfind("error: InfeasibleTotal: ", 0) == 0);

  auto dir = fresh_dir("toy");
  {
    std::ofstream os(dir / "toy.csv");
    os << "# demand=4 name=toy\nid,bus,gamma,beta,mu,pmin,pmax\n1,1,0.5,0,0,-10,10\n2,2,0.5,0,0,-10,10\n";
  }
  auto toy = cli_run({"oracle", "--case", (dir / "toy.csv").string(), "--out", dir.string()});
  REQUIRE(toy.code == 0);
  CHECK(toy.out.find("lam_star=-2") != std::string::npos);
  CHECK(toy.out.find("x_star[1]=2") != std::string::npos);
  CHECK(toy.out.find("x_star[2]=2") != std::string::npos);
  CHECK(fs::exists(dir / "oracle.csv"));
}

TEST_CASE("bounds command") {
  auto dir = fresh_dir("bounds_rs");
  auto run = cli_run({"run", "--case", "builtin:ieee14", "--schedule", "recipsqrt", "--iters", "1000", "--out",
                      dir.string()});
  REQUIRE_MESSAGE(run.code == 0, run.err);
  CHECK(fs::exists(dir / "rate.csv"));
  fs::remove(dir / "rate.csv");

  auto b = cli_run({"bounds", "--trace", (dir / "trace.csv").string()});
  CHECK_MESSAGE(b.code == 0, b.err, b.out);
  CHECK(b.out.find("satisfied=true") != std::string::npos);
  CHECK(fs::exists(dir / "rate.csv"));
  auto summary = nlohmann::json::parse(slurp(dir / "bounds_summary.json"));
  CHECK(summary["satisfied"] == true);
  CHECK(summary["n"] == 5);

  // K = 1 uses ln 1 = 0: the weighted bound is 2 sqrt(n) C / (1 - sigma2).
  auto weighted = csv_rows(slurp(dir / "weighted.csv"));
  REQUIRE(weighted.size() >= 2);
  CHECK(weighted[1][0] == "1");
  const double sigma2 = summary["sigma2"].get<double>();
  CHECK(std::stod(weighted[1][2]) == doctest::Approx(2 * std::sqrt(5.0) * 60 / (1 - sigma2)).epsilon(1e-12));

  auto pdir = fresh_dir("bounds_pl");
  REQUIRE(cli_run({"run", "--schedule", "powerlaw:0.08:0.85", "--iters", "50", "--out", pdir.string()}).code == 0);
  auto hv = cli_run({"bounds", "--trace", (pdir / "trace.csv").string()});
  CHECK(hv.code == 2);
  CHECK(hv.err.rfind("error: HypothesisViolation: ", 0) == 0);
  // An explicit --schedule overrides run.json.
  auto forced = cli_run({"bounds", "--trace", (pdir / "trace.csv").string(), "--schedule", "recipsqrt", "--out",
                         fresh_dir("bounds_forced").string()});
  CHECK((forced.code == 0 || forced.code == 1));
}

TEST_CASE("case subcommands") {
  auto v = cli_run({"case", "validate", "builtin:ieee14"});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("ok: ieee14 generators=5 demand=300", 0) == 0);

  auto s1 = cli_run({"case", "synth", "--seed", "7"});
  auto s2 = cli_run({"case", "synth", "--seed", "7"});
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
  CHECK(s1.out == serialize_case(synth_ieee118_style(7)));

  auto dir = fresh_dir("cases");
  REQUIRE(cli_run({"case", "synth", "--seed", "3", "--n", "12", "--out", (dir / "c.csv").string()}).code == 0);
  auto check = cli_run({"case", "validate", (dir / "c.csv").string()});
  CHECK(check.code == 0);
  CHECK(check.out.find("generators=12") != std::string::npos);

  {
    std::ofstream os(dir / "bad.csv");
    os << "# demand=100\nid,bus,gamma,beta,mu,pmin,pmax\n1,1,-0.1,2.0,0,0,80\n";
  }
  auto bad = cli_run({"case", "validate", (dir / "bad.csv").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("error: ParseError: line 3: ", 0) == 0);
}

TEST_CASE("graph and weight specs") {
  auto c = builtin_ieee14();
  CHECK(cli::build_graph("complete", c, {}).edges().size() == 10);
  CHECK(cli::build_graph("path", c, {}).edges().size() == 4);
  CHECK(cli::build_graph("bus-derived", c, cli::load_bus_lines("", "builtin:ieee14")).edges().size() == 10);
  CHECK_THROWS_AS(cli::load_bus_lines("", "file:x.csv"), GraphError);

  auto dir = fresh_dir("specs");
  {
    std::ofstream os(dir / "edges.txt");
    os << "0 1\n1 2\n";
  }
  CHECK_THROWS_AS(cli::build_graph("edges:" + (dir / "edges.txt").string(), c, {}), GraphError);
  {
    std::ofstream os(dir / "w.txt");
    os << "0.5 0.5\n0.5 0.5\n";
  }
  CHECK_THROWS_AS(cli::build_weights("file:" + (dir / "w.txt").string(), GraphTopology::path(3)), WeightMatrixError);
  CHECK(cli::build_weights("maxdegree", GraphTopology::path(3))(0, 1) == 0.25);
  CHECK(cli::load_case("synth:7:10").generators.size() == 10);
  CHECK_THROWS_AS(cli::load_case("builtin:ieee30"), InvalidArgument);
}
