#include "doctest.h"

#include <random>

#include "conicmcp/error.hpp"
#include "conicmcp/oracle.hpp"
#include "instances.hpp"

using namespace conicmcp;
using conicmcp::testing::random_psd;
using conicmcp::testing::random_vector;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Matrix mat(int rows, int cols, std::initializer_list<double> values) {
  Matrix m(rows, cols);
  auto it = values.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

ConicProgram lp(Vector c, Matrix A, Vector b) {
  const int q = static_cast<int>(c.size());
  return {Objective::linear(std::move(c)), std::move(A), std::move(b), ConeSpec::nonneg(q),
          std::nullopt};
}

struct HandLp {
  ConicProgram prog;
  double value;
  Vector x;
};

std::vector<HandLp> hand_built_suite() {
  return {
      {lp(vec({1, 2}), mat(1, 2, {1, 1}), vec({1})), 1.0, vec({1, 0})},
      {lp(vec({1, 1}), mat(1, 2, {1, 1}), vec({1})), 1.0, vec({1, 0})},
      {lp(vec({-1, 0}), mat(1, 2, {1, 1}), vec({1})), -1.0, vec({1, 0})},
      {lp(vec({3, 1, 2}), mat(1, 3, {1, 1, 1}), vec({4})), 4.0, vec({0, 4, 0})},
      {lp(vec({1, 1}), mat(1, 2, {1, -1}), vec({1})), 1.0, vec({1, 0})},
      {lp(vec({1, 1, 1}), mat(2, 3, {1, 0, 1, 0, 1, 1}), vec({2, 3})), 3.0, vec({0, 1, 2})},
      {lp(vec({-1, -1, 0, 0}), mat(2, 4, {1, 0, 1, 0, 0, 1, 0, 1}), vec({2, 3})), -5.0,
       vec({2, 3, 0, 0})},
      {lp(vec({2, 3, 0}), mat(1, 3, {1, 1, -1}), vec({5})), 10.0, vec({5, 0, 0})},
      {lp(vec({1, 1, 0, 0}), mat(2, 4, {1, 2, -1, 0, 3, 1, 0, -1}), vec({4, 6})), 2.8,
       vec({1.6, 1.2, 0, 0})},
      {lp(vec({0, 0}), mat(1, 2, {1, 1}), vec({1})), 0.0, vec({1, 0})},
  };
}

}  // namespace

TEST_CASE("lp_vertex_solve: worked examples") {
  const auto r = lp_vertex_solve(lp(vec({1, 2}), mat(1, 2, {1, 1}), vec({1})));
  CHECK(r.optimum_value == 1.0);
  CHECK(r.optimizer == vec({1, 0}));
  CHECK(r.method == OracleMethod::VertexEnumeration);

  const auto tie = lp_vertex_solve(lp(vec({1, 1}), mat(1, 2, {1, 1}), vec({1})));
  CHECK(tie.optimum_value == 1.0);
  CHECK(tie.basis == std::vector<int>{0});

  const auto neg = lp_vertex_solve(lp(vec({-1, 0}), mat(1, 2, {1, 1}), vec({1})));
  CHECK(neg.optimum_value == -1.0);
  CHECK(neg.optimizer == vec({1, 0}));
}

TEST_CASE("lp_vertex_solve: hand-built suite is exact") {
  for (const auto& item : hand_built_suite()) {
    const auto r = lp_vertex_solve(item.prog);
    CHECK(std::abs(r.optimum_value - item.value) <= 1e-9);
    CHECK((r.optimizer - item.x).norm() <= 1e-9);
  }
}

TEST_CASE("lp_vertex_solve: errors") {
  CHECK_THROWS_AS(lp_vertex_solve(lp(vec({1, 1}), mat(1, 2, {1, 1}), vec({-1}))), OracleError);
  // x1 - x2 = 1 with cost -x1 is unbounded along (1, 1).
  CHECK_THROWS_AS(lp_vertex_solve(lp(vec({-1, 0}), mat(1, 2, {1, -1}), vec({1}))), OracleError);
  ConicProgram soc{Objective::linear(vec({1, 0, 0})), mat(1, 3, {0, 1, 0}), vec({1}),
                   ConeSpec::second_order(3), std::nullopt};
  CHECK_THROWS_AS(lp_vertex_solve(soc), OracleError);
  ConicProgram quad{Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), mat(1, 2, {1, 1}),
                    vec({1}), ConeSpec::nonneg(2), std::nullopt};
  CHECK_THROWS_AS(lp_vertex_solve(quad), OracleError);
}

TEST_CASE("lp_basic_solutions skips singular bases") {
  const auto sols = lp_basic_solutions(mat(2, 3, {1, 1, 0, 2, 2, 1}), vec({1, 3}));
  for (const auto& s : sols) CHECK(s.basis != std::vector<int>{0, 1});
}

TEST_CASE("grid_search_min: quadratic example") {
  const ConicProgram prog{Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)),
                          mat(1, 2, {1, 1}), vec({2}), ConeSpec::nonneg(2), std::nullopt};
  const Box box{vec({0, 0}), vec({3, 3})};
  const auto r = grid_search_min(prog, box, 1e-3);
  CHECK(r.method == OracleMethod::GridSearch);
  CHECK(std::abs(r.optimum_value - 1.0) <= 2e-3);
  CHECK((r.optimizer - vec({1, 1})).norm() <= 1e-2);
  CHECK(grid_guarantee(prog, box, 1e-3) > 0.0);
}

TEST_CASE("grid_search_min: SOC example") {
  const ConicProgram prog{Objective::linear(vec({1, 0, 0})), mat(1, 3, {0, 1, 0}), vec({1}),
                          ConeSpec::second_order(3), std::nullopt};
  const Box box{vec({0, 1, -1}), vec({2, 1, 1})};
  const auto r = grid_search_min(prog, box, 1e-3);
  CHECK(std::abs(r.optimum_value - 1.0) <= 2e-3);
}

TEST_CASE("grid and vertex oracles agree within the grid guarantee") {
  const auto prog = lp(vec({1, 2}), mat(1, 2, {1, 1}), vec({1}));
  const Box box{vec({0, 0}), vec({2, 2})};
  const auto grid = grid_search_min(prog, box, 1e-3);
  const auto vertex = lp_vertex_solve(prog);
  CHECK(std::abs(grid.optimum_value - vertex.optimum_value) <= grid_guarantee(prog, box, 1e-3));
}

TEST_CASE("grid_search_min: errors") {
  const auto prog = lp(vec({1, 2}), mat(1, 2, {1, 1}), vec({1}));
  CHECK_THROWS_AS(grid_search_min(prog, Box{vec({5, -6}), vec({6, -5})}, 1e-2), OracleError);
  CHECK_THROWS_AS(grid_search_min(prog, Box{vec({0}), vec({1})}, 1e-2), DimensionError);
  const auto big = lp(Vector::Ones(5), Matrix::Ones(1, 5), vec({1}));
  CHECK_THROWS_AS(grid_search_min(big, Box{Vector::Zero(5), Vector::Ones(5)}, 0.5), OracleError);
}

TEST_CASE("barrier oracle agrees with the vertex oracle") {
  for (const auto& item : hand_built_suite()) {
    // Strictly positive start: move from x* along random null-space directions.
    const auto& prog = item.prog;
    const Matrix N = Eigen::FullPivLU<Matrix>(prog.A).kernel();
    bool found = false;
    Vector start = item.x;
    std::mt19937_64 rng(1);
    for (int t = 0; t < 2000 && !found; ++t) {
      start = item.x + N * random_vector(static_cast<int>(N.cols()), rng);
      found = start.minCoeff() > 1e-3;
    }
    REQUIRE(found);
    const auto r = barrier_solve(prog, start);
    CHECK(r.method == OracleMethod::Barrier);
    CHECK(std::abs(r.optimum_value - item.value) <= 1e-6);
  }
}

TEST_CASE("barrier oracle on the SOC example") {
  const ConicProgram prog{Objective::linear(vec({1, 0, 0})), mat(1, 3, {0, 1, 0}), vec({1}),
                          ConeSpec::second_order(3), std::nullopt};
  const auto r = barrier_solve(prog, vec({2, 1, 0}));
  CHECK(std::abs(r.optimum_value - 1.0) <= 1e-8);
  CHECK_THROWS_AS(barrier_solve(prog, vec({1, 1, 0})), OracleError);
  CHECK_THROWS_AS(barrier_solve(prog, vec({3, 0, 0})), OracleError);
}

TEST_CASE("finite_diff_gradient examples") {
  const Objective lin = Objective::linear(vec({1, -2, 3}));
  CHECK((finite_diff_gradient(lin, vec({4, 5, 6}), 1e-6) - vec({1, -2, 3})).norm() <= 1e-8);
  const Objective quad = Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  CHECK((finite_diff_gradient(quad, vec({3, 4}), 1e-6) - vec({3, 4})).norm() <= 1e-6);

  std::mt19937_64 rng(5);
  const Objective random = Objective::quadratic(random_psd(4, rng), random_vector(4, rng));
  for (int s = 0; s < 100; ++s) {
    const Vector x = random_vector(4, rng);
    const Vector g = gradient(random, x);
    REQUIRE((finite_diff_gradient(random, x, 1e-6) - g).norm() <= 1e-5 * std::max(1.0, g.norm()));
  }
}

TEST_CASE("projection_optimality_check examples") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cone = conicmcp::testing::random_cone(rng);
    const Vector x = random_vector(cone.dim(), rng);
    CHECK(projection_optimality_check(cone, x, project(cone, x), 10000, trial));
    const Vector inside = project(cone, x);
    CHECK(projection_optimality_check(cone, inside, inside, 1000, trial));
  }
  CHECK_FALSE(projection_optimality_check(ConeSpec::nonneg(2), vec({-1, -1}), vec({1, 1}), 1000));
  CHECK_FALSE(projection_optimality_check(ConeSpec::second_order(3), vec({0, 2, 0}),
                                          vec({2, 1, 0}), 1000));
  CHECK_THROWS_AS(projection_optimality_check(ConeSpec::nonneg(2), vec({1, 1}), vec({-1, 0}), 10),
                  PreconditionError);
}

TEST_CASE("sample_in_cone produces cone members") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto cone = conicmcp::testing::random_cone(rng);
    REQUIRE(contains(cone, sample_in_cone(cone, rng), 1e-12));
  }
}

TEST_CASE("reference oracle on generated LP instances") {
  for (int i = 0; i < 50; ++i) {
    const auto inst = conicmcp::testing::random_co_instance(0, i);
    const auto ref = conicmcp::testing::reference_optimum(inst.prog);
    CHECK(is_feasible(inst.prog, ref.optimizer, 1e-8));
    if (conicmcp::testing::is_lp_orthant(inst.prog)) {
      CHECK(ref.method == OracleMethod::VertexEnumeration);
      const auto barrier = barrier_solve(inst.prog, *inst.prog.slater_point);
      CHECK(std::abs(barrier.optimum_value - ref.optimum_value) <= 1e-6);
    }
  }
}
