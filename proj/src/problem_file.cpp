#include "conicmcp/problem_file.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "document must be an object" : where + " must be an object", where);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ParseError("unknown key \"" + key + "\"", join(where, key));
  }
}

const Json& require_key(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError("missing key \"" + key + "\"", join(where, key));
  return j.at(key);
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError("expected a number", field);
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ParseError("expected an integer", field);
  return j.get<int>();
}

Vector vector_from(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("expected an array of numbers", field);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

// Row-major array of arrays. `cols` < 0 infers the width from the first row;
// an empty array is a 0 x max(cols, 0) matrix.
Matrix matrix_from(const Json& j, const std::string& field, int cols = -1) {
  if (!j.is_array()) throw ParseError("expected an array of rows", field);
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index width = cols;
  if (width < 0) width = rows > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix M(rows, width);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError("expected a row array", row_field);
    if (static_cast<Eigen::Index>(row.size()) != width) {
      throw DimensionError(field + " row " + std::to_string(r) + " has " +
                               std::to_string(row.size()) + " entries, expected " +
                               std::to_string(width),
                           field);
    }
    for (Eigen::Index c = 0; c < width; ++c) {
      M(r, c) = number(row[static_cast<std::size_t>(c)], row_field + "[" + std::to_string(c) + "]");
    }
  }
  return M;
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Matrix& M) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Objective objective_from(const Json& j, const std::string& field) {
  reject_unknown_keys(j, {"type", "c", "Q"}, field);
  const Json& type = require_key(j, "type", field);
  if (!type.is_string()) throw ParseError("objective type must be a string", join(field, "type"));
  const Vector c = vector_from(require_key(j, "c", field), join(field, "c"));
  if (type == "linear") {
    if (j.contains("Q")) throw ParseError("linear objective must not carry Q", join(field, "Q"));
    return Objective::linear(c);
  }
  if (type == "quadratic") {
    const Matrix Q = matrix_from(require_key(j, "Q", field), join(field, "Q"));
    if (Q.rows() != Q.cols() || Q.rows() != c.size()) {
      throw DimensionError(join(field, "Q") + " must be square of the length of " + join(field, "c"),
                           join(field, "Q"));
    }
    return Objective::quadratic(Q, c);
  }
  throw ParseError("unknown objective type \"" + type.get<std::string>() + "\"", join(field, "type"));
}

ReformulationRecord record_from(const Json& j, const std::string& field) {
  reject_unknown_keys(j, {"source", "target", "variable_map", "total_dim"}, field);
  ReformulationRecord record;
  record.source = require_key(j, "source", field).get<std::string>();
  record.target = require_key(j, "target", field).get<std::string>();
  record.total_dim = integer(require_key(j, "total_dim", field), join(field, "total_dim"));
  const Json& blocks = require_key(j, "variable_map", field);
  if (!blocks.is_array()) throw ParseError("expected an array", join(field, "variable_map"));
  for (const auto& b : blocks) {
    const std::string bf = join(field, "variable_map");
    reject_unknown_keys(b, {"target", "source", "offset", "size"}, bf);
    record.variable_map.push_back({require_key(b, "target", bf).get<std::string>(),
                                   require_key(b, "source", bf).get<std::string>(),
                                   integer(require_key(b, "offset", bf), bf + ".offset"),
                                   integer(require_key(b, "size", bf), bf + ".size")});
  }
  return record;
}

std::optional<Objective> optional_objective(const Json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return objective_from(j.at(key), key);
}

void require_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols, const std::string& field) {
  if (M.rows() != rows || M.cols() != cols) {
    throw DimensionError(field + " is " + std::to_string(M.rows()) + "x" +
                             std::to_string(M.cols()) + ", expected " + std::to_string(rows) +
                             "x" + std::to_string(cols),
                         field);
  }
}

void require_length(const Vector& v, Eigen::Index n, const std::string& field) {
  if (v.size() != n) {
    throw DimensionError(field + " has length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(n),
                         field);
  }
}

ConicProgram co_from(const Json& j) {
  ConeSpec cone = cone_from_json(require_key(j, "cone", ""));
  const Json& a = require_key(j, "A", "");
  Matrix A = matrix_from(a, "A", a.empty() ? cone.dim() : -1);
  std::optional<Vector> slater;
  if (j.contains("slater_point")) slater = vector_from(j.at("slater_point"), "slater_point");
  return ConicProgram{objective_from(require_key(j, "objective", ""), "objective"), std::move(A),
                      vector_from(require_key(j, "b", ""), "b"), std::move(cone), std::move(slater)};
}

ComplementarityProblem cp_from(const Json& j) {
  ConeSpec cone = cone_from_json(require_key(j, "cone", ""));
  const int n = cone.dim();
  Matrix M = matrix_from(require_key(j, "M", ""), "M", n);
  require_shape(M, n, n, "M");
  Vector r = vector_from(require_key(j, "r", ""), "r");
  require_length(r, n, "r");
  return ComplementarityProblem{std::move(cone), std::move(M), std::move(r),
                                optional_objective(j, "phi")};
}

MixedComplementarityProblem micp_from(const Json& j) {
  const int p = integer(require_key(j, "p", ""), "p");
  const int q = integer(require_key(j, "q", ""), "q");
  if (p < 0 || q < 1) throw DimensionError("need p >= 0 and q >= 1", "p");
  ConeSpec cone = cone_from_json(require_key(j, "cone", ""));
  if (cone.dim() != q) {
    throw DimensionError("cone.dim = " + std::to_string(cone.dim()) + " does not match q = " +
                             std::to_string(q),
                         "cone");
  }
  auto block = [&](const char* key, int rows, int cols) {
    Matrix M = matrix_from(require_key(j, key, ""), key, cols);
    require_shape(M, rows, cols, key);
    return M;
  };
  auto vec = [&](const char* key, int n) {
    Vector v = vector_from(require_key(j, key, ""), key);
    require_length(v, n, key);
    return v;
  };
  return MixedComplementarityProblem{
      .p = p,
      .q = q,
      .Gu = block("Gu", p, p),
      .Gv = block("Gv", p, q),
      .g0 = vec("g0", p),
      .Hu = block("Hu", q, p),
      .Hv = block("Hv", q, q),
      .h0 = vec("h0", q),
      .phi = optional_objective(j, "phi"),
      .cone = std::move(cone),
  };
}

LPPair lp_pair_from(const Json& j) {
  ConeSpec cone = cone_from_json(require_key(j, "cone", ""));
  Vector c = vector_from(require_key(j, "c", ""), "c");
  const Json& a = require_key(j, "A", "");
  Matrix A = matrix_from(a, "A", a.empty() ? static_cast<int>(c.size()) : -1);
  LPPair::Role role = LPPair::Role::Primal;
  if (j.contains("role")) {
    const Json& r = j.at("role");
    if (r == "primal") {
      role = LPPair::Role::Primal;
    } else if (r == "dual") {
      role = LPPair::Role::Dual;
    } else {
      throw ParseError("role must be \"primal\" or \"dual\"", "role");
    }
  }
  return LPPair{std::move(c), std::move(A), vector_from(require_key(j, "b", ""), "b"),
                std::move(cone), role};
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

const char* problem_kind(const Problem& problem) {
  switch (problem.index()) {
    case 0: return "co";
    case 1: return "cp";
    case 2: return "micp";
    default: return "lp_pair";
  }
}

Json to_json(const ConeSpec& cone) {
  Json j;
  switch (cone.kind()) {
    case ConeSpec::Kind::Zero: j["type"] = "zero"; break;
    case ConeSpec::Kind::Free: j["type"] = "free"; break;
    case ConeSpec::Kind::NonnegOrthant: j["type"] = "nonneg"; break;
    case ConeSpec::Kind::SecondOrder: j["type"] = "soc"; break;
    case ConeSpec::Kind::Product: {
      j["type"] = "product";
      Json factors = Json::array();
      for (const auto& f : cone.factors()) factors.push_back(to_json(f));
      j["factors"] = std::move(factors);
      break;
    }
  }
  j["dim"] = cone.dim();
  return j;
}

ConeSpec cone_from_json(const Json& j, const std::string& field) {
  reject_unknown_keys(j, {"type", "dim", "factors"}, field);
  const Json& type = require_key(j, "type", field);
  if (!type.is_string()) throw ParseError("cone type must be a string", join(field, "type"));
  const std::string t = type.get<std::string>();
  if (t == "product") {
    const Json& factors = require_key(j, "factors", field);
    if (!factors.is_array() || factors.empty()) {
      throw ParseError("product cone needs a nonempty factors array", join(field, "factors"));
    }
    std::vector<ConeSpec> parts;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      parts.push_back(cone_from_json(factors[i], join(field, "factors[" + std::to_string(i) + "]")));
    }
    ConeSpec cone = ConeSpec::product(std::move(parts));
    if (j.contains("dim") && integer(j.at("dim"), join(field, "dim")) != cone.dim()) {
      throw DimensionError(join(field, "dim") + " does not equal the sum of factor dimensions",
                           join(field, "dim"));
    }
    return cone;
  }
  if (j.contains("factors")) throw ParseError("only product cones have factors", join(field, "factors"));
  const int dim = integer(require_key(j, "dim", field), join(field, "dim"));
  if (dim < 1) throw DimensionError("cone dimension must be >= 1", join(field, "dim"));
  if (t == "nonneg") return ConeSpec::nonneg(dim);
  if (t == "soc") return ConeSpec::second_order(dim);
  if (t == "free") return ConeSpec::free(dim);
  if (t == "zero") return ConeSpec::zero(dim);
  throw ParseError("unknown cone type \"" + t + "\"", join(field, "type"));
}

Json to_json(const Objective& obj) {
  Json j;
  j["type"] = obj.kind == Objective::Kind::Linear ? "linear" : "quadratic";
  if (obj.kind == Objective::Kind::Quadratic) j["Q"] = to_json(obj.Q);
  j["c"] = to_json(obj.c);
  return j;
}

Json to_json(const ReformulationRecord& record) {
  Json blocks = Json::array();
  for (const auto& b : record.variable_map) {
    blocks.push_back({{"target", b.target}, {"source", b.source}, {"offset", b.offset}, {"size", b.size}});
  }
  return {{"source", record.source}, {"target", record.target}, {"variable_map", blocks},
          {"total_dim", record.total_dim}};
}

ProblemDocument parse_problem(std::string_view text, bool run_validation) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("document must be an object");
  const Json& version = require_key(j, "schema_version", "");
  if (integer(version, "schema_version") != kSchemaVersion) {
    throw ParseError("unsupported schema_version " + version.dump(), "schema_version");
  }
  const Json& kind = require_key(j, "kind", "");
  if (!kind.is_string()) throw ParseError("kind must be a string", "kind");

  ProblemDocument doc{ConicProgram{Objective::linear(Vector()), Matrix(), Vector(),
                                   ConeSpec::free(1), std::nullopt},
                      std::nullopt};
  const std::string k = kind.get<std::string>();
  if (k == "co") {
    reject_unknown_keys(j, {"schema_version", "kind", "objective", "A", "b", "cone", "slater_point", "provenance"}, "");
    doc.problem = co_from(j);
  } else if (k == "cp") {
    reject_unknown_keys(j, {"schema_version", "kind", "cone", "M", "r", "phi", "provenance"}, "");
    doc.problem = cp_from(j);
  } else if (k == "micp") {
    reject_unknown_keys(j, {"schema_version", "kind", "p", "q", "Gu", "Gv", "g0", "Hu", "Hv", "h0", "phi", "cone", "provenance"}, "");
    doc.problem = micp_from(j);
  } else if (k == "lp_pair") {
    reject_unknown_keys(j, {"schema_version", "kind", "c", "A", "b", "cone", "role", "provenance"}, "");
    doc.problem = lp_pair_from(j);
  } else {
    throw ParseError("unknown problem kind \"" + k + "\"", "kind");
  }
  if (j.contains("provenance")) doc.provenance = record_from(j.at("provenance"), "provenance");

  if (run_validation) std::visit([](const auto& p) { require_valid(p); }, doc.problem);
  return doc;
}

Json to_json(const ProblemDocument& doc) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = problem_kind(doc.problem);
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConicProgram>) {
          j["objective"] = to_json(p.objective);
          j["A"] = to_json(p.A);
          j["b"] = to_json(p.b);
          j["cone"] = to_json(p.cone);
          if (p.slater_point) j["slater_point"] = to_json(*p.slater_point);
        } else if constexpr (std::is_same_v<T, ComplementarityProblem>) {
          j["cone"] = to_json(p.cone);
          j["M"] = to_json(p.M);
          j["r"] = to_json(p.r);
          if (p.phi) j["phi"] = to_json(*p.phi);
        } else if constexpr (std::is_same_v<T, MixedComplementarityProblem>) {
          j["p"] = p.p;
          j["q"] = p.q;
          j["Gu"] = to_json(p.Gu);
          j["Gv"] = to_json(p.Gv);
          j["g0"] = to_json(p.g0);
          j["Hu"] = to_json(p.Hu);
          j["Hv"] = to_json(p.Hv);
          j["h0"] = to_json(p.h0);
          if (p.phi) j["phi"] = to_json(*p.phi);
          j["cone"] = to_json(p.cone);
        } else {
          j["c"] = to_json(p.c);
          j["A"] = to_json(p.A);
          j["b"] = to_json(p.b);
          j["cone"] = to_json(p.cone);
          j["role"] = p.role == LPPair::Role::Primal ? "primal" : "dual";
        }
      },
      doc.problem);
  if (doc.provenance) j["provenance"] = to_json(*doc.provenance);
  return j;
}

std::string serialize_problem(const ProblemDocument& doc) { return to_json(doc).dump(2) + "\n"; }

Json to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value},
                      {"detail", c.detail}, {"field", c.field}});
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

Json to_json(const Certificate& cert) {
  return {{"eq_residual", cert.eq_residual},
          {"cone_violation", cert.cone_violation},
          {"cone_distance", cert.cone_distance},
          {"dual_violation", cert.dual_violation},
          {"dual_distance", cert.dual_distance},
          {"orthogonality", cert.orthogonality},
          {"orthogonality_bound", cert.orthogonality_bound},
          {"objective", cert.objective},
          {"tol", cert.tol},
          {"eq_ok", cert.eq_ok},
          {"cone_ok", cert.cone_ok},
          {"dual_ok", cert.dual_ok},
          {"orthogonality_ok", cert.orthogonality_ok},
          {"passed", cert.passed()},
          {"notes", cert.notes}};
}

Json to_json(const OracleResult& result) {
  Json j = {{"optimum_value", result.optimum_value},
            {"optimizer", to_json(result.optimizer)},
            {"method", to_string(result.method)},
            {"resolution", result.resolution}};
  if (!result.basis.empty()) j["basis"] = result.basis;
  return j;
}

Json to_json(const SolveResult& result) {
  return {{"x", to_json(result.x)},
          {"residual", result.residual},
          {"iterations", result.iterations},
          {"status", to_string(result.status)},
          {"flipped_free_rows", result.flipped_free_rows}};
}

Json to_json(const CoSolveResult& result) {
  Json j = to_json(static_cast<const SolveResult&>(result.solve));
  j["x"] = to_json(result.x);
  j["y"] = to_json(result.y);
  j["value"] = result.value;
  j["certificate"] = to_json(result.certificate);
  j["record"] = to_json(result.record);
  j["passed"] = result.passed();
  return j;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "iteration,residual\n";
  char buf[64];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", t.iteration, t.residual);
    out += buf;
  }
  return out;
}

Vector parse_vector_arg(const std::string& text, const std::string& field) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError("empty entry in vector", field);
    const std::string token = item.substr(first, last - first + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ParseError("cannot parse \"" + token + "\" as a number", field);
    values.push_back(value);
  }
  if (values.empty()) throw ParseError("empty vector", field);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace conicmcp
