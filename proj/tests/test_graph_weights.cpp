#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dlm/case_io.hpp"
#include "dlm/errors.hpp"
#include "dlm/graph.hpp"
#include "dlm/spectral.hpp"
#include "dlm/weights.hpp"
#include "support.hpp"

using namespace dlm;

namespace {

// Independent oracle: Eigen's dense SVD.
double eigen_sigma2(const DenseMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(1);
}

DenseMatrix dense(std::initializer_list<std::initializer_list<double>> rows) {
  DenseMatrix a(rows.size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

WeightMatrixError::Kind violation_of(const DenseMatrix& a, const GraphTopology& g) {
  try {
    validate_weight_matrix(a, g);
  } catch (const WeightMatrixError& e) {
    return e.violation();
  }
  FAIL("expected a WeightMatrixError");
  return WeightMatrixError::Kind::Shape;
}

}  // namespace

TEST_CASE("graph construction rejects malformed topologies") {
  CHECK_THROWS_AS(GraphTopology(1, {}), GraphError);
  CHECK_THROWS_AS(GraphTopology(3, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(GraphTopology(3, {{0, 1}, {1, 0}}), GraphError);
  CHECK_THROWS_AS(GraphTopology(3, {{0, 3}}), GraphError);
  GraphTopology g(4, {{2, 1}, {0, 3}});
  CHECK(g.edges() == std::vector<Edge>{{0, 3}, {1, 2}});
  CHECK(g.has_edge(3, 0));
  CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("check_connected") {
  CHECK(check_connected(GraphTopology::path(3)));
  CHECK_FALSE(check_connected(GraphTopology(3, {{0, 1}})));
  CHECK(check_connected(generator_cycle(builtin_ieee14())));
  CHECK(generator_cycle(builtin_ieee14()).edges().size() == 5);
}

TEST_CASE("metropolis weights on small graphs") {
  SUBCASE("path 0-1-2") {
    auto w = metropolis_weights(GraphTopology::path(3));
    CHECK(w(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w(1, 2) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(w(2, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(w(1, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w(0, 2) == 0.0);
  }
  SUBCASE("complete K3") {
    auto w = metropolis_weights(GraphTopology::complete(3));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(w(i, j) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  SUBCASE("single edge") {
    auto w = metropolis_weights(GraphTopology(2, {{0, 1}}));
    CHECK(w.dense() == dense({{0.5, 0.5}, {0.5, 0.5}}));
  }
  SUBCASE("disconnected graph is rejected") {
    CHECK_THROWS_AS(metropolis_weights(GraphTopology(3, {{0, 1}})), GraphError);
  }
}

TEST_CASE("validate_weight_matrix") {
  GraphTopology edge(2, {{0, 1}});
  SUBCASE("uniform averaging matrix") {
    auto w = validate_weight_matrix(dense({{0.5, 0.5}, {0.5, 0.5}}), edge);
    CHECK(std::abs(w.sigma2()) < 1e-15);
  }
  SUBCASE("lazy two-node matrix") {
    auto a = dense({{0.75, 0.25}, {0.25, 0.75}});
    auto w = validate_weight_matrix(a, edge);
    CHECK(eigen_sigma2(a) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w.sigma2() == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("identity on an edge violates sparsity") {
    CHECK(violation_of(dense({{1, 0}, {0, 1}}), edge) == WeightMatrixError::Kind::SparsityMismatch);
  }
  SUBCASE("each violation names its index") {
    auto g = GraphTopology::path(3);
    try {
      validate_weight_matrix(dense({{0.6, 0.3, 0}, {0.3, 0.4, 0.3}, {0, 0.3, 0.7}}), g);
      FAIL("expected RowSumViolation");
    } catch (const WeightMatrixError& e) {
      CHECK(e.violation() == WeightMatrixError::Kind::RowSumViolation);
      CHECK(e.row() == 0);
      CHECK(e.kind() == "RowSumViolation");
    }
    // Rows sum to one, columns do not.
    CHECK(violation_of(dense({{0.5, 0.5, 0}, {0.25, 0.5, 0.25}, {0, 0.5, 0.5}}), g) ==
          WeightMatrixError::Kind::ColSumViolation);
    CHECK(violation_of(dense({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}), g) == WeightMatrixError::Kind::ZeroDiagonal);
    CHECK(violation_of(dense({{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}}), g) ==
          WeightMatrixError::Kind::SparsityMismatch);
    CHECK(violation_of(DenseMatrix(2), g) == WeightMatrixError::Kind::Shape);
  }
  SUBCASE("non-symmetric doubly stochastic matrices are accepted") {
    auto a = dense({{0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}, {0.3, 0.2, 0.5}});
    auto w = validate_weight_matrix(a, GraphTopology::complete(3));
    CHECK(w.sigma2() == doctest::Approx(eigen_sigma2(a)).epsilon(1e-12));
    CHECK(w.sigma2() < 1.0);
  }
}

TEST_CASE("sigma2 examples") {
  CHECK(std::abs(metropolis_weights(GraphTopology::complete(3)).sigma2()) < 1e-15);
  // Eigenvalues of the path-3 Metropolis matrix are {1, 2/3, 0}.
  auto path = metropolis_weights(GraphTopology::path(3));
  CHECK(eigen_sigma2(path.dense()) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(path.sigma2() == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(sigma2_power_iteration(path.dense()) == doctest::Approx(2.0 / 3).epsilon(1e-10));
}

TEST_CASE("metropolis output is symmetric and validates at 1e-12 on random graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    auto g = testing::random_connected_graph(rng, n, rng.unit() * 0.5);
    auto w = metropolis_weights(g);
    CHECK_NOTHROW(validate_weight_matrix(w.dense(), g, 1e-12));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) REQUIRE(w(i, j) == w(j, i));
    CHECK(w.sigma2() < 1.0);
    CHECK_NOTHROW(max_degree_weights(g));
  }
}

TEST_CASE("sigma2 routes agree with the dense oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(19);
    auto g = testing::random_connected_graph(rng, n, rng.unit() * 0.4);
    auto w = trial % 2 == 0 ? metropolis_weights(g) : max_degree_weights(g);
    const double expect = eigen_sigma2(w.dense());
    CHECK(std::abs(w.sigma2() - expect) <= 1e-8);
    CHECK(std::abs(singular_values_jacobi(w.dense())[1] - expect) <= 1e-8);
    CHECK(std::abs(sigma2_power_iteration(w.dense()) - expect) <= 1e-8);
  }
}

TEST_CASE("power iteration handles graphs above the dense limit") {
  Rng rng(17);
  for (std::size_t n : {80u, 150u}) {
    auto g = testing::random_connected_graph(rng, n, 0.03);
    auto w = metropolis_weights(g);
    CHECK(n > kDenseSpectralLimit);
    CHECK(std::abs(w.sigma2() - eigen_sigma2(w.dense())) <= 1e-8);
  }
}

TEST_CASE("power iteration reports non-convergence") {
  auto w = metropolis_weights(GraphTopology::cycle(40));
  PowerIterationOptions opts;
  opts.max_iters = 3;
  CHECK_THROWS_AS(sigma2_power_iteration(w.dense(), opts), ConvergenceError);
}

TEST_CASE("edge list and weight file parsing") {
  auto g = parse_edge_list("# ring\n0 1\n\n1 2   # trailing comment\n2 0\n");
  CHECK(g.size() == 3);
  CHECK(g.edges().size() == 3);
  CHECK(parse_edge_list("0 1\n", 4).size() == 4);
  try {
    parse_edge_list("0 1\n1 x\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_edge_list("0 0\n"), GraphError);

  auto a = parse_weight_matrix("0.75 0.25\n0.25 0.75\n");
  CHECK(a == dense({{0.75, 0.25}, {0.25, 0.75}}));
  CHECK_THROWS_AS(parse_weight_matrix("0.5 0.5\n0.5\n"), ParseError);
  CHECK_THROWS_AS(parse_weight_matrix("0.5 abc\n0.5 0.5\n"), ParseError);
}
