#include "doctest.h"

#include <random>

#include "conicmcp/error.hpp"
#include "conicmcp/problem_file.hpp"
#include "conicmcp/reformulation.hpp"
#include "instances.hpp"

using namespace conicmcp;

namespace {

const char* kMinimalCo = R"({
  "schema_version": 1,
  "kind": "co",
  "objective": {"type": "linear", "c": [1, 2]},
  "A": [[1, 1]],
  "b": [1],
  "cone": {"type": "nonneg", "dim": 2}
})";

std::string with_replaced(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

template <typename E>
std::string field_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const E& e) {
    return e.field();
  } catch (const std::exception& e) {
    FAIL("unexpected exception: " << e.what());
  }
  FAIL("no exception");
  return {};
}

}  // namespace

TEST_CASE("minimal CO document parses and round trips") {
  const auto doc = parse_problem(kMinimalCo);
  REQUIRE(std::holds_alternative<ConicProgram>(doc.problem));
  const auto& prog = std::get<ConicProgram>(doc.problem);
  CHECK(prog.p() == 1);
  CHECK(prog.q() == 2);
  CHECK(prog.cone == ConeSpec::nonneg(2));
  CHECK(std::string(problem_kind(doc.problem)) == "co");
  const auto again = parse_problem(serialize_problem(doc));
  CHECK(std::get<ConicProgram>(again.problem) == prog);
}

TEST_CASE("rank-deficient A names field A") {
  const auto text = with_replaced(with_replaced(kMinimalCo, "[[1, 1]]", "[[1, 1], [2, 2]]"),
                                  "\"b\": [1]", "\"b\": [1, 2]");
  CHECK(field_of<ValidationError>(text) == "A");
}

TEST_CASE("cone dimension mismatch names both fields") {
  const auto text = with_replaced(kMinimalCo, "\"dim\": 2", "\"dim\": 3");
  try {
    parse_problem(text);
    FAIL("no exception");
  } catch (const DimensionError& e) {
    CHECK(e.field() == "cone");
    const std::string msg = e.what();
    CHECK(msg.find("cone") != std::string::npos);
    CHECK(msg.find("A") != std::string::npos);
  }
}

TEST_CASE("schema errors are field specific") {
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"kind\": \"co\"", "\"kind\": \"co\", \"extra\": 1")) ==
        "extra");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"dim\": 2", "\"dim\": 2, \"bogus\": 0")) ==
        "cone.bogus");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"nonneg\"", "\"psd\"")) == "cone.type");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"linear\"", "\"cubic\"")) == "objective.type");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"b\": [1],\n", "")) == "b");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"schema_version\": 1", "\"schema_version\": 2")) ==
        "schema_version");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "\"co\"", "\"nlp\"")) == "kind");
  CHECK(field_of<ParseError>(with_replaced(kMinimalCo, "[1, 2]", "[1, \"x\"]")).rfind("objective.c", 0) == 0);
}

TEST_CASE("quadratic objective validation") {
  const auto text = with_replaced(kMinimalCo, R"({"type": "linear", "c": [1, 2]})",
                                  R"({"type": "quadratic", "c": [0, 0], "Q": [[0, 1], [1, 0]]})");
  CHECK(field_of<ValidationError>(text).rfind("objective", 0) == 0);
  // Without validation the document still parses.
  CHECK_NOTHROW(parse_problem(text, false));
}

TEST_CASE("syntax errors report a line") {
  const std::string broken = "{\n  \"schema_version\": 1,\n  \"kind\": \"co\",\n  oops\n}";
  try {
    parse_problem(broken);
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("product cones parse with nested factors") {
  const auto cone = cone_from_json(Json::parse(
      R"({"type": "product", "factors": [{"type": "nonneg", "dim": 2},
          {"type": "product", "factors": [{"type": "soc", "dim": 3}, {"type": "free", "dim": 1}]}]})"));
  CHECK(cone.dim() == 6);
  CHECK(cone_from_json(to_json(cone)) == cone);
  CHECK_THROWS_AS(cone_from_json(Json::parse(R"({"type": "product", "dim": 5,
      "factors": [{"type": "nonneg", "dim": 2}]})")),
                  DimensionError);
  CHECK_THROWS_AS(cone_from_json(Json::parse(R"({"type": "product", "factors": []})")), ParseError);
  CHECK_THROWS_AS(cone_from_json(Json::parse(R"({"type": "soc", "dim": 0})")), DimensionError);
}

TEST_CASE("round trip for every problem type") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 16; ++i) {
    const auto prog = conicmcp::testing::random_co_instance(3, i).prog;
    const auto micp = co_to_micp(prog);
    const auto cp = micp_to_cp(micp);
    const auto lp = conicmcp::testing::random_lp_instance(static_cast<std::uint64_t>(i)).pair;
    const std::vector<ProblemDocument> docs = {
        {prog, std::nullopt},
        {micp, co_to_micp_record(prog)},
        {cp, micp_to_cp_record(micp)},
        {lp, std::nullopt},
        {build_conic_dual(lp), std::nullopt},
    };
    for (const auto& doc : docs) {
      const auto back = parse_problem(serialize_problem(doc));
      REQUIRE(back.problem == doc.problem);
      REQUIRE(back.provenance == doc.provenance);
      REQUIRE(serialize_problem(back) == serialize_problem(doc));
    }
  }
}

TEST_CASE("trace csv and vector arguments") {
  const std::vector<TracePoint> trace = {{0, 1.5}, {100, 0.1}};
  CHECK(trace_csv(trace) == "iteration,residual\n0,1.5\n100,0.10000000000000001\n");
  const Vector v = parse_vector_arg("1,0,-2.5", "x");
  CHECK(v.size() == 3);
  CHECK(v(2) == -2.5);
  CHECK_THROWS_AS(parse_vector_arg("1,,2", "x"), ParseError);
  CHECK_THROWS_AS(parse_vector_arg("a", "x"), ParseError);
}

TEST_CASE("certificate serialization") {
  const auto doc = parse_problem(kMinimalCo);
  const auto& prog = std::get<ConicProgram>(doc.problem);
  Vector x(2), y(1);
  x << 1, 0;
  y << 1;
  const Json j = to_json(kkt_certificate(prog, x, y));
  CHECK(j.at("passed") == true);
  CHECK(j.at("objective") == 1.0);
  CHECK(j.at("notes").empty());
}
