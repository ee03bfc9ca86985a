#include "conicmcp/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "conicmcp/error.hpp"
#include "conicmcp/problem_file.hpp"

namespace conicmcp {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path, "file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write " + path, "trace");
  out << contents;
}

const ConicProgram& require_co(const ProblemDocument& doc, const char* command) {
  if (const auto* prog = std::get_if<ConicProgram>(&doc.problem)) return *prog;
  throw ValidationError(std::string(command) + " needs a problem of kind \"co\", got \"" +
                            problem_kind(doc.problem) + "\"",
                        "kind");
}

int emit(std::ostream& out, const Json& doc, bool passed) {
  out << doc.dump(2) << "\n";
  return passed ? kExitPass : kExitFail;
}

struct Flags {
  std::string file;
  std::string to;
  int p = 0;
  double step = SolveOptions{}.step;
  double tol = -1.0;
  int max_iter = SolveOptions{}.max_iter;
  std::uint64_t seed = 0;
  std::string trace;
  std::string x;
  std::string y;
  std::string method;
  double resolution = 1e-2;
  std::string box = "-2,2";
};

int cmd_validate(const Flags& f, std::ostream& out) {
  const auto doc = parse_problem(read_file(f.file), false);
  ValidationReport report = std::visit([](const auto& p) { return validate(p); }, doc.problem);
  if (const auto* prog = std::get_if<ConicProgram>(&doc.problem);
      prog && prog->slater_point && report.passed()) {
    const bool ok = slater_check(*prog, *prog->slater_point, 1e-9);
    report.checks.push_back({"slater_point", ok, 0.0,
                             ok ? "" : "slater_point is not strictly feasible", "slater_point"});
  }
  Json j = to_json(report);
  j["command"] = "validate";
  j["kind"] = problem_kind(doc.problem);
  return emit(out, j, report.passed());
}

int cmd_reformulate(const Flags& f, std::ostream& out) {
  const auto doc = parse_problem(read_file(f.file));
  ProblemDocument result{doc.problem, std::nullopt};
  if (const auto* prog = std::get_if<ConicProgram>(&doc.problem)) {
    const auto micp = co_to_micp(*prog);
    if (f.to == "micp") {
      result = {micp, co_to_micp_record(*prog)};
    } else {
      auto record = co_to_micp_record(*prog);
      record.target = "cp";
      result = {micp_to_cp(micp), record};
    }
  } else if (const auto* micp = std::get_if<MixedComplementarityProblem>(&doc.problem)) {
    if (f.to != "cp") throw ValidationError("a micp can only be reformulated --to cp", "to");
    result = {micp_to_cp(*micp), micp_to_cp_record(*micp)};
  } else if (const auto* cp = std::get_if<ComplementarityProblem>(&doc.problem)) {
    if (f.to != "micp") throw ValidationError("a cp can only be reformulated --to micp", "to");
    result = {cp_to_micp(*cp, f.p), cp_to_micp_record(*cp, f.p)};
  } else {
    throw ValidationError("lp_pair documents cannot be reformulated", "kind");
  }
  out << serialize_problem(result);
  return kExitPass;
}

int cmd_solve(const Flags& f, std::ostream& out) {
  const auto doc = parse_problem(read_file(f.file));
  SolveOptions opts;
  opts.step = f.step;
  if (f.tol > 0.0) opts.tol = f.tol;
  opts.max_iter = f.max_iter;
  opts.seed = f.seed;

  Json j;
  bool passed = false;
  std::vector<TracePoint> trace;
  if (const auto* prog = std::get_if<ConicProgram>(&doc.problem)) {
    const auto result = solve_co(*prog, opts);
    j = to_json(result);
    passed = result.passed();
    trace = result.solve.trace;
  } else if (const auto* micp = std::get_if<MixedComplementarityProblem>(&doc.problem)) {
    const auto result = solve_micp(*micp, opts);
    j = to_json(static_cast<const SolveResult&>(result));
    j["u"] = Json(std::vector<double>(result.u.data(), result.u.data() + result.u.size()));
    j["v"] = Json(std::vector<double>(result.v.data(), result.v.data() + result.v.size()));
    passed = result.status == SolveStatus::Converged;
    trace = result.trace;
  } else if (const auto* cp = std::get_if<ComplementarityProblem>(&doc.problem)) {
    const auto result = solve_cp(*cp, opts);
    j = to_json(result);
    passed = result.status == SolveStatus::Converged;
    trace = result.trace;
  } else {
    throw ValidationError("lp_pair documents are checked with `duality`, not solved", "kind");
  }
  j["command"] = "solve";
  j["kind"] = problem_kind(doc.problem);
  if (doc.provenance) j["provenance"] = to_json(*doc.provenance);
  if (!f.trace.empty()) write_file(f.trace, trace_csv(trace));
  return emit(out, j, passed);
}

int cmd_verify(const Flags& f, std::ostream& out) {
  const auto doc = parse_problem(read_file(f.file));
  const auto& prog = require_co(doc, "verify");
  const double tol = f.tol > 0.0 ? f.tol : kDefaultCertificateTol;
  const auto cert = kkt_certificate(prog, parse_vector_arg(f.x, "x"), parse_vector_arg(f.y, "y"), tol);
  Json j = to_json(cert);
  j["command"] = "verify";
  return emit(out, j, cert.passed());
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  const auto doc = parse_problem(read_file(f.file));
  const auto& prog = require_co(doc, "oracle");
  std::string method = f.method;
  if (method.empty()) {
    const bool lp = prog.objective.kind == Objective::Kind::Linear &&
                    prog.cone.kind() == ConeSpec::Kind::NonnegOrthant;
    method = lp ? "vertex" : prog.slater_point ? "barrier" : "grid";
  }
  OracleResult result;
  if (method == "vertex") {
    result = lp_vertex_solve(prog);
  } else if (method == "barrier") {
    if (!prog.slater_point) throw ValidationError("barrier oracle needs a slater_point", "slater_point");
    result = barrier_solve(prog, *prog.slater_point);
  } else if (method == "grid") {
    const Vector bounds = parse_vector_arg(f.box, "box");
    if (bounds.size() != 2) throw ParseError("--box takes L,U", "box");
    const Box box{Vector::Constant(prog.q(), bounds(0)), Vector::Constant(prog.q(), bounds(1))};
    const double points = std::pow((bounds(1) - bounds(0)) / f.resolution + 1.0, prog.q());
    if (points > 2e8) throw ValidationError("grid too large; use a coarser --resolution or a smaller --box", "resolution");
    result = grid_search_min(prog, box, f.resolution);
  } else {
    throw ValidationError("unknown oracle method \"" + method + "\"", "method");
  }
  Json j = to_json(result);
  j["command"] = "oracle";
  return emit(out, j, true);
}

int cmd_duality(const Flags& f, std::ostream& out) {
  const auto doc = parse_problem(read_file(f.file));
  const auto* pair = std::get_if<LPPair>(&doc.problem);
  if (!pair) throw ValidationError("duality needs a problem of kind \"lp_pair\"", "kind");
  const Vector x = parse_vector_arg(f.x, "x");
  const Vector y = parse_vector_arg(f.y, "y");
  const double tol = f.tol > 0.0 ? f.tol : kDefaultCertificateTol;
  const double gap = duality_gap(*pair, x, y);
  const double slack = complementary_slackness(*pair, x, y);
  const double identity = std::abs(gap - y.dot(pair->A * x - pair->b));
  Json j = {{"command", "duality"},   {"gap", gap}, {"complementary_slackness", slack},
            {"identity_residual", identity}, {"tol", tol}, {"passed", slack <= tol}};
  return emit(out, j, slack <= tol);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conic optimization / complementarity toolkit", "conicmcp"};
  app.require_subcommand(1);
  Flags f;

  auto* validate_cmd = app.add_subcommand("validate", "Check a problem file");
  validate_cmd->add_option("file", f.file)->required();

  auto* reformulate_cmd = app.add_subcommand("reformulate", "Rewrite a problem as MiCP or CP");
  reformulate_cmd->add_option("file", f.file)->required();
  reformulate_cmd->add_option("--to", f.to)->required()->check(CLI::IsMember({"micp", "cp"}));
  reformulate_cmd->add_option("--p", f.p, "Size of the free block for cp -> micp");

  auto* solve_cmd = app.add_subcommand("solve", "Solve a co, cp or micp problem");
  solve_cmd->add_option("file", f.file)->required();
  solve_cmd->add_option("--step", f.step);
  solve_cmd->add_option("--tol", f.tol);
  solve_cmd->add_option("--max-iter", f.max_iter);
  solve_cmd->add_option("--seed", f.seed);
  solve_cmd->add_option("--trace", f.trace, "Write the residual trace as CSV");

  auto* verify_cmd = app.add_subcommand("verify", "Certify a candidate (x, y) of a co problem");
  verify_cmd->add_option("file", f.file)->required();
  verify_cmd->add_option("--x", f.x)->required();
  verify_cmd->add_option("--y", f.y)->required();
  verify_cmd->add_option("--tol", f.tol);

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference optimum of a co problem");
  oracle_cmd->add_option("file", f.file)->required();
  oracle_cmd->add_option("--method", f.method)->check(CLI::IsMember({"vertex", "grid", "barrier"}));
  oracle_cmd->add_option("--resolution", f.resolution);
  oracle_cmd->add_option("--box", f.box, "Uniform box bounds L,U for the grid");

  auto* duality_cmd = app.add_subcommand("duality", "Duality gap and slackness of an lp_pair");
  duality_cmd->add_option("file", f.file)->required();
  duality_cmd->add_option("--x", f.x)->required();
  duality_cmd->add_option("--y", f.y)->required();
  duality_cmd->add_option("--tol", f.tol);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "usage"}, {"message", e.what()}, {"field", ""}}.dump(2) << "\n";
    return kExitError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(f, out);
    if (reformulate_cmd->parsed()) return cmd_reformulate(f, out);
    if (solve_cmd->parsed()) return cmd_solve(f, out);
    if (verify_cmd->parsed()) return cmd_verify(f, out);
    if (oracle_cmd->parsed()) return cmd_oracle(f, out);
    if (duality_cmd->parsed()) return cmd_duality(f, out);
  } catch (const Error& e) {
    err << Json{{"error", e.kind()}, {"message", e.what()}, {"field", e.field()}}.dump(2) << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << Json{{"error", "internal"}, {"message", e.what()}, {"field", ""}}.dump(2) << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace conicmcp
