#include "doctest.h"

#include <map>

#include "conicmcp/certification.hpp"
#include "conicmcp/error.hpp"
#include "conicmcp/oracle.hpp"
#include "conicmcp/reformulation.hpp"
#include "conicmcp/solvers.hpp"
#include "instances.hpp"

using namespace conicmcp;
using conicmcp::testing::random_co_instance;
using conicmcp::testing::reference_optimum;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Matrix row(std::initializer_list<double> values) { return vec(values).transpose(); }

ConicProgram lp_example() {
  return {Objective::linear(vec({1, 2})), row({1, 1}), vec({1}), ConeSpec::nonneg(2), std::nullopt};
}

ComplementarityProblem scalar_cp(double r) {
  return {ConeSpec::nonneg(1), Matrix::Identity(1, 1), vec({r}), std::nullopt};
}

}  // namespace

TEST_CASE("solve_cp: scalar examples") {
  SolveOptions opts;
  opts.initial_point = vec({0});
  const auto up = solve_cp(scalar_cp(-1), opts);
  CHECK(up.status == SolveStatus::Converged);
  CHECK(up.x(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(up.residual <= opts.tol);

  opts.initial_point = vec({5});
  const auto down = solve_cp(scalar_cp(1), opts);
  CHECK(down.status == SolveStatus::Converged);
  CHECK(std::abs(down.x(0)) <= 1e-9);
  CHECK(cp_residual(scalar_cp(1), down.x) <= opts.tol);
}

TEST_CASE("solve_cp on embedded KKT systems matches the oracle") {
  for (int i = 0; i < 8; ++i) {
    const auto inst = random_co_instance(0, i);
    INFO(inst.family);
    const auto cp = micp_to_cp(co_to_micp(inst.prog));
    SolveOptions opts;
    opts.step = recommended_step(cp);
    const auto result = solve_cp(cp, opts);
    REQUIRE(result.status == SolveStatus::Converged);
    CHECK(cp_residual(cp, result.x) <= 1e-10);
    const Vector x = result.x.tail(inst.prog.q());
    CHECK(std::abs(eval_objective(inst.prog.objective, x) -
                   reference_optimum(inst.prog).optimum_value) <= 1e-6);
  }
}

TEST_CASE("solve_micp: LP and quadratic examples") {
  const auto lp = solve_micp(co_to_micp(lp_example()));
  REQUIRE(lp.status == SolveStatus::Converged);
  CHECK((lp.u - vec({1})).norm() <= 1e-6);
  CHECK((lp.v - vec({1, 0})).norm() <= 1e-6);

  const ConicProgram qp{Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), row({1, 0}),
                        vec({1}), ConeSpec::nonneg(2), std::nullopt};
  const auto q = solve_micp(co_to_micp(qp));
  REQUIRE(q.status == SolveStatus::Converged);
  CHECK((q.u - vec({1})).norm() <= 1e-6);
  CHECK((q.v - vec({1, 0})).norm() <= 1e-6);
}

TEST_CASE("solve_micp with p = 0 reproduces solve_cp") {
  const ComplementarityProblem cp{ConeSpec::product({ConeSpec::nonneg(2), ConeSpec::second_order(3)}),
                                  Matrix::Identity(5, 5), vec({1, -1, -2, 0.5, 0.5}), std::nullopt};
  SolveOptions opts;
  opts.seed = 12;
  const auto direct = solve_cp(cp, opts);
  const auto embedded = solve_micp(cp_to_micp(cp, 0), opts);
  CHECK(direct.x == embedded.v);
  CHECK(direct.trace == embedded.trace);
  CHECK(direct.iterations == embedded.iterations);
  CHECK(embedded.u.size() == 0);
}

TEST_CASE("solve_co examples") {
  const auto lp = solve_co(lp_example());
  CHECK(lp.passed());
  CHECK(lp.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((lp.x - vec({1, 0})).norm() <= 1e-6);
  CHECK(lp.record.source == "co");

  const ConicProgram qp{Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)), row({1, 1}),
                        vec({2}), ConeSpec::nonneg(2), std::nullopt};
  const auto q = solve_co(qp);
  CHECK(q.passed());
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((q.x - vec({1, 1})).norm() <= 1e-6);
  CHECK(q.y(0) == doctest::Approx(1.0).epsilon(1e-6));

  const ConicProgram soc{Objective::linear(vec({1, 0, 0})), row({0, 1, 0}), vec({1}),
                         ConeSpec::second_order(3), std::nullopt};
  const auto s = solve_co(soc);
  CHECK(s.passed());
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((s.x - vec({1, 1, 0})).norm() <= 1e-5);
}

TEST_CASE("solve_co rejects invalid programs") {
  auto prog = lp_example();
  prog.A = Matrix(2, 2);
  prog.A << 1, 1, 2, 2;
  prog.b = vec({1, 2});
  CHECK_THROWS_AS(solve_co(prog), ValidationError);
}

TEST_CASE("determinism: identical seeds give identical traces") {
  const auto prog = random_co_instance(0, 3).prog;
  SolveOptions opts;
  opts.seed = 77;
  opts.step = recommended_step(prog);
  const auto a = solve_co(prog, opts);
  const auto b = solve_co(prog, opts);
  CHECK(a.solve.trace == b.solve.trace);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  opts.seed = 78;
  const auto c = solve_co(prog, opts);
  CHECK_FALSE(c.solve.trace == a.solve.trace);
}

TEST_CASE("trace is logged every log_every iterations and at the end") {
  SolveOptions opts;
  opts.log_every = 10;
  const auto result = solve_micp(co_to_micp(lp_example()), opts);
  REQUIRE_FALSE(result.trace.empty());
  for (std::size_t i = 0; i + 1 < result.trace.size(); ++i) {
    CHECK(result.trace[i].iteration == 10 * static_cast<int>(i));
  }
  CHECK(result.trace.back().iteration == result.iterations);
  CHECK(result.trace.back().residual == result.residual);
}

TEST_CASE("monotone residual trend on the generated suite") {
  for (int i = 0; i < 16; ++i) {
    const auto prog = random_co_instance(0, i).prog;
    SolveOptions opts;
    opts.step = recommended_step(prog);
    const auto result = solve_co(prog, opts);
    std::map<int, double> logged;
    for (const auto& t : result.solve.trace) logged[t.iteration] = t.residual;
    for (const auto& [k, r] : logged) {
      const auto later = logged.find(10 * k);
      if (later != logged.end()) REQUIRE(later->second <= r + 1e-12);
    }
  }
}

TEST_CASE("iteration limit is reported honestly") {
  SolveOptions opts;
  opts.max_iter = 5;
  const auto result = solve_co(lp_example(), opts);
  CHECK(result.solve.status == SolveStatus::IterationLimit);
  CHECK(result.solve.iterations == 5);
  CHECK(result.solve.residual > opts.tol);
  CHECK_FALSE(result.passed());
  CHECK(std::string(to_string(result.solve.status)) == "iteration_limit");
}

TEST_CASE("divergence and invalid options") {
  const ComplementarityProblem stiff{ConeSpec::free(2), 1e6 * Matrix::Identity(2, 2), vec({1, 1}),
                                     std::nullopt};
  SolveOptions opts;
  opts.step = 1.0;
  CHECK_THROWS_AS(solve_cp(stiff, opts), DivergenceError);

  SolveOptions bad;
  bad.step = -1.0;
  CHECK_THROWS_AS(solve_cp(scalar_cp(1), bad), ValidationError);
  bad.step = 0.1;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve_cp(scalar_cp(1), bad), ValidationError);
}

TEST_CASE("recommended step bounds the Lipschitz constant") {
  const auto cp = micp_to_cp(co_to_micp(random_co_instance(0, 1).prog));
  const double L = lipschitz_estimate(cp);
  CHECK(L > 0.0);
  CHECK(recommended_step(cp) * L == doctest::Approx(0.5));
  CHECK(recommended_step(cp) < 2.0 / L);
}
