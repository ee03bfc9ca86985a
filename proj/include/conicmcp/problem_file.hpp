#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "conicmcp/certification.hpp"
#include "conicmcp/oracle.hpp"
#include "conicmcp/problem.hpp"
#include "conicmcp/reformulation.hpp"
#include "conicmcp/solvers.hpp"

namespace conicmcp {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

using Problem =
    std::variant<ConicProgram, ComplementarityProblem, MixedComplementarityProblem, LPPair>;

// "co", "cp", "micp" or "lp_pair".
const char* problem_kind(const Problem& problem);

struct ProblemDocument {
  Problem problem;
  std::optional<ReformulationRecord> provenance;
};

// Parses a problem file. Unknown keys, missing keys and shape errors raise
// ParseError / DimensionError naming the field; with `run_validation` the
// problem must also pass validate() (rank, PSD, ...), else ValidationError.
ProblemDocument parse_problem(std::string_view text, bool run_validation = true);

Json to_json(const ProblemDocument& doc);
std::string serialize_problem(const ProblemDocument& doc);

Json to_json(const ConeSpec& cone);
ConeSpec cone_from_json(const Json& j, const std::string& field = "cone");

Json to_json(const Objective& obj);
Json to_json(const ValidationReport& report);
Json to_json(const Certificate& cert);
Json to_json(const ReformulationRecord& record);
Json to_json(const OracleResult& result);
Json to_json(const SolveResult& result);
Json to_json(const CoSolveResult& result);

// "iteration,residual" lines.
std::string trace_csv(const std::vector<TracePoint>& trace);

// Parses "1,0,-2.5" into a vector.
Vector parse_vector_arg(const std::string& text, const std::string& field);

}  // namespace conicmcp
