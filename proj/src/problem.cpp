#include "conicmcp/problem.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

bool same(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

void require_dim(const Objective& obj, const Vector& x) {
  if (x.size() != obj.dim()) {
    throw DimensionError("point has dimension " + std::to_string(x.size()) +
                             " but the objective has dimension " + std::to_string(obj.dim()),
                         "x");
  }
}

void add_shape(ValidationReport& report, const std::string& name, Eigen::Index got,
               Eigen::Index want, const std::string& field, const std::string& detail = {}) {
  ValidationCheck check{name, got == want, static_cast<double>(got), {}, field, true};
  if (!check.passed) {
    check.detail = !detail.empty() ? detail
                                   : field + " has size " + std::to_string(got) +
                                         ", expected " + std::to_string(want);
  }
  report.checks.push_back(std::move(check));
}

void add_matrix_shape(ValidationReport& report, const std::string& name, const Matrix& M,
                      Eigen::Index rows, Eigen::Index cols, const std::string& field) {
  ValidationCheck check{name, M.rows() == rows && M.cols() == cols,
                        static_cast<double>(M.rows() * M.cols()), {}, field, true};
  if (!check.passed) {
    check.detail = field + " is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                   ", expected " + std::to_string(rows) + "x" + std::to_string(cols);
  }
  report.checks.push_back(std::move(check));
}

void append(ValidationReport& into, const ValidationReport& from, const std::string& prefix) {
  for (auto check : from.checks) {
    if (!check.field.empty()) check.field = prefix + "." + check.field;
    into.checks.push_back(std::move(check));
  }
}

bool finite(const Matrix& M) { return M.size() == 0 || M.allFinite(); }

}  // namespace

Objective Objective::linear(Vector c) {
  Objective obj;
  obj.kind = Kind::Linear;
  obj.c = std::move(c);
  return obj;
}

Objective Objective::quadratic(Matrix Q, Vector c) {
  if (Q.rows() != Q.cols() || Q.rows() != c.size()) {
    throw DimensionError("quadratic objective needs a square Q matching the length of c", "Q");
  }
  Objective obj;
  obj.kind = Kind::Quadratic;
  obj.Q = std::move(Q);
  obj.c = std::move(c);
  return obj;
}

bool Objective::operator==(const Objective& other) const {
  return kind == other.kind && same(Q, other.Q) && same(c, other.c);
}

double eval_objective(const Objective& obj, const Vector& x) {
  require_dim(obj, x);
  const double linear = obj.c.dot(x);
  if (obj.kind == Objective::Kind::Linear) return linear;
  return 0.5 * x.dot(obj.Q * x) + linear;
}

Vector gradient(const Objective& obj, const Vector& x) {
  require_dim(obj, x);
  if (obj.kind == Objective::Kind::Linear) return obj.c;
  return obj.Q * x + obj.c;
}

Matrix hessian(const Objective& obj) {
  if (obj.kind == Objective::Kind::Linear) return Matrix::Zero(obj.dim(), obj.dim());
  return obj.Q;
}

bool ConicProgram::operator==(const ConicProgram& other) const {
  const bool slater_equal =
      slater_point.has_value() == other.slater_point.has_value() &&
      (!slater_point || same(*slater_point, *other.slater_point));
  return objective == other.objective && same(A, other.A) && same(b, other.b) &&
         cone == other.cone && slater_equal;
}

bool ComplementarityProblem::operator==(const ComplementarityProblem& other) const {
  return cone == other.cone && same(M, other.M) && same(r, other.r) && phi == other.phi;
}

bool MixedComplementarityProblem::operator==(const MixedComplementarityProblem& other) const {
  return p == other.p && q == other.q && same(Gu, other.Gu) && same(Gv, other.Gv) &&
         same(g0, other.g0) && same(Hu, other.Hu) && same(Hv, other.Hv) &&
         same(h0, other.h0) && phi == other.phi && cone == other.cone;
}

bool LPPair::operator==(const LPPair& other) const {
  return same(c, other.c) && same(A, other.A) && same(b, other.b) && cone == other.cone &&
         role == other.role;
}

Vector evaluate(const ComplementarityProblem& cp, const Vector& x) {
  require_point(cp.cone, x);
  Vector out = cp.M * x + cp.r;
  if (cp.phi) out += gradient(*cp.phi, x);
  return out;
}

namespace {

void require_blocks(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v) {
  if (u.size() != micp.p) {
    throw DimensionError("u has dimension " + std::to_string(u.size()) + ", expected p = " +
                             std::to_string(micp.p),
                         "u");
  }
  require_point(micp.cone, v, "v");
}

}  // namespace

Vector evaluate_G(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v) {
  require_blocks(micp, u, v);
  return micp.Gu * u + micp.Gv * v + micp.g0;
}

Vector evaluate_H(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v) {
  require_blocks(micp, u, v);
  Vector out = micp.Hu * u + micp.Hv * v + micp.h0;
  if (micp.phi) out += gradient(*micp.phi, v);
  return out;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

ValidationReport validate(const Objective& obj) {
  ValidationReport report;
  report.checks.push_back({"finite", finite(obj.c) && finite(obj.Q), 0.0,
                           finite(obj.c) && finite(obj.Q) ? "" : "objective has non-finite entries",
                           "c"});
  if (obj.kind == Objective::Kind::Linear) return report;

  const bool square = obj.Q.rows() == obj.Q.cols() && obj.Q.rows() == obj.c.size();
  add_shape(report, "Q_shape", square ? obj.Q.rows() : -1, obj.c.size(), "Q");
  if (!square || !finite(obj.Q)) return report;

  const double asym = obj.Q.size() ? (obj.Q - obj.Q.transpose()).cwiseAbs().maxCoeff() : 0.0;
  report.checks.push_back({"Q_symmetric", asym <= kSymmetryTol, asym,
                           asym <= kSymmetryTol ? "" : "Q is not symmetric", "Q"});
  if (asym > kSymmetryTol) return report;

  const Matrix sym = 0.5 * (obj.Q + obj.Q.transpose());
  const double min_eig =
      sym.size() ? Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly)
                       .eigenvalues()
                       .minCoeff()
                 : 0.0;
  report.checks.push_back({"Q_psd", min_eig >= -kPsdTol, min_eig,
                           min_eig >= -kPsdTol ? ""
                                               : "Q is indefinite (min eigenvalue " +
                                                     std::to_string(min_eig) + ")",
                           "Q"});
  return report;
}

ValidationReport validate(const ConicProgram& prog) {
  ValidationReport report;
  const auto q = prog.A.cols();
  add_shape(report, "cone_dim", prog.cone.dim(), q, "cone",
            "cone.dim = " + std::to_string(prog.cone.dim()) + " does not match A, which has q = " +
                std::to_string(q) + " columns");
  add_shape(report, "objective_dim", prog.objective.dim(), q, "objective.c");
  add_shape(report, "b_len", prog.b.size(), prog.A.rows(), "b");
  if (prog.slater_point) add_shape(report, "slater_dim", prog.slater_point->size(), q, "slater_point");
  report.checks.push_back({"A_nonempty", prog.A.rows() >= 1, static_cast<double>(prog.A.rows()),
                           prog.A.rows() >= 1 ? "" : "A must have at least one row", "A"});
  if (!report.passed()) return report;

  append(report, validate(prog.objective), "objective");
  report.checks.push_back({"finite_data", finite(prog.A) && finite(prog.b), 0.0,
                           finite(prog.A) && finite(prog.b) ? "" : "A or b has non-finite entries",
                           "A"});

  // Full row rank: smallest singular value above a relative threshold.
  const Eigen::JacobiSVD<Matrix> svd(prog.A);
  const auto& sv = svd.singularValues();
  const double largest = sv.size() ? sv.maxCoeff() : 0.0;
  const double smallest = sv.size() == prog.A.rows() ? sv.minCoeff() : 0.0;
  const bool full_rank = prog.A.rows() <= prog.A.cols() && largest > 0.0 &&
                         smallest > kRankRelTol * largest;
  report.checks.push_back({"A_full_row_rank", full_rank, smallest,
                           full_rank ? "" : "A is rank-deficient (smallest singular value " +
                                                std::to_string(smallest) + ")",
                           "A"});
  return report;
}

ValidationReport validate(const ComplementarityProblem& cp) {
  ValidationReport report;
  const auto n = cp.cone.dim();
  add_matrix_shape(report, "M_shape", cp.M, n, n, "M");
  add_shape(report, "r_len", cp.r.size(), n, "r");
  if (cp.phi) {
    add_shape(report, "phi_dim", cp.phi->dim(), n, "phi.c");
    append(report, validate(*cp.phi), "phi");
  }
  return report;
}

ValidationReport validate(const MixedComplementarityProblem& micp) {
  ValidationReport report;
  add_shape(report, "cone_dim", micp.cone.dim(), micp.q, "cone");
  add_matrix_shape(report, "Gu_shape", micp.Gu, micp.p, micp.p, "Gu");
  add_matrix_shape(report, "Gv_shape", micp.Gv, micp.p, micp.q, "Gv");
  add_shape(report, "g0_len", micp.g0.size(), micp.p, "g0");
  add_matrix_shape(report, "Hu_shape", micp.Hu, micp.q, micp.p, "Hu");
  add_matrix_shape(report, "Hv_shape", micp.Hv, micp.q, micp.q, "Hv");
  add_shape(report, "h0_len", micp.h0.size(), micp.q, "h0");
  if (micp.phi) {
    add_shape(report, "phi_dim", micp.phi->dim(), micp.q, "phi.c");
    append(report, validate(*micp.phi), "phi");
  }
  return report;
}

ValidationReport validate(const LPPair& pair) {
  ValidationReport report;
  add_shape(report, "c_len", pair.c.size(), pair.A.cols(), "c");
  add_shape(report, "b_len", pair.b.size(), pair.A.rows(), "b");
  add_shape(report, "cone_dim", pair.cone.dim(), pair.A.rows(), "cone");
  return report;
}

template <typename Problem>
void require_valid(const Problem& problem) {
  const auto report = validate(problem);
  if (const auto* failure = report.first_failure()) {
    if (failure->shape) throw DimensionError(failure->detail, failure->field);
    throw ValidationError(failure->detail, failure->field);
  }
}

template void require_valid(const Objective&);
template void require_valid(const ConicProgram&);
template void require_valid(const ComplementarityProblem&);
template void require_valid(const MixedComplementarityProblem&);
template void require_valid(const LPPair&);

bool is_feasible(const ConicProgram& prog, const Vector& x, double tol) {
  require_point(prog.cone, x);
  if (prog.A.cols() != x.size()) throw DimensionError("A does not match the point", "A");
  return (prog.A * x - prog.b).norm() <= tol && contains(prog.cone, x, tol);
}

bool slater_check(const ConicProgram& prog, const Vector& x_s, double margin) {
  require_point(prog.cone, x_s, "slater_point");
  if (prog.A.cols() != x_s.size()) throw DimensionError("A does not match the point", "A");
  return (prog.A * x_s - prog.b).norm() <= 1e-9 && interior_contains(prog.cone, x_s, margin);
}

}  // namespace conicmcp
