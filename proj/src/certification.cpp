#include "conicmcp/certification.hpp"

#include <algorithm>
#include <cmath>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

// Cone of the primal slack Ax - b, whichever role the pair carries.
ConeSpec primal_cone(const LPPair& pair) {
  return pair.role == LPPair::Role::Primal ? pair.cone : dual(pair.cone);
}

void require_pair_points(const LPPair& pair, const Vector& x, const Vector& y) {
  require_valid(pair);
  if (x.size() != pair.n()) throw DimensionError("x does not match the columns of A", "x");
  if (y.size() != pair.m()) throw DimensionError("y does not match the rows of A", "y");
}

void require_pair_feasible(const LPPair& pair, const Vector& x, const Vector& y) {
  require_pair_points(pair, x, y);
  if (!lp_primal_feasible(pair, x)) {
    throw PreconditionError("primal point is infeasible: Ax - b is outside " +
                            primal_cone(pair).describe());
  }
  if (!lp_dual_feasible(pair, y)) {
    throw PreconditionError("dual point is infeasible: A'y != c or y outside " +
                            dual(primal_cone(pair)).describe());
  }
}

}  // namespace

double Certificate::primal_feas() const noexcept { return std::max(eq_residual, cone_violation); }

Certificate kkt_certificate(const ConicProgram& prog, const Vector& x, const Vector& y,
                            double tol) {
  require_valid(prog);
  require_point(prog.cone, x, "x");
  if (y.size() != prog.p()) throw DimensionError("y does not match the rows of A", "y");

  const ConeSpec dual_cone = dual(prog.cone);
  const Vector h = gradient(prog.objective, x) - prog.A.transpose() * y;

  Certificate cert;
  cert.tol = tol;
  cert.eq_residual = (prog.A * x - prog.b).norm();
  cert.cone_violation = violation(prog.cone, x);
  cert.cone_distance = distance(prog.cone, x);
  cert.dual_violation = violation(dual_cone, h);
  cert.dual_distance = distance(dual_cone, h);
  cert.orthogonality = x.dot(h);
  cert.orthogonality_bound = tol * (1.0 + x.norm() * h.norm());
  cert.objective = eval_objective(prog.objective, x);

  cert.eq_ok = cert.eq_residual <= tol;
  cert.cone_ok = cert.cone_violation <= tol;
  cert.dual_ok = cert.dual_violation <= tol;
  cert.orthogonality_ok = std::abs(cert.orthogonality) <= cert.orthogonality_bound;

  if (x.norm() <= tol) {
    cert.notes.emplace_back("candidate is the apex x = 0; the equivalence is stated for x != 0");
  }
  return cert;
}

bool lp_primal_feasible(const LPPair& pair, const Vector& x, double tol) {
  require_valid(pair);
  if (x.size() != pair.n()) throw DimensionError("x does not match the columns of A", "x");
  return contains(primal_cone(pair), pair.A * x - pair.b, tol);
}

bool lp_dual_feasible(const LPPair& pair, const Vector& y, double tol) {
  require_valid(pair);
  if (y.size() != pair.m()) throw DimensionError("y does not match the rows of A", "y");
  return (pair.A.transpose() * y - pair.c).norm() <= tol &&
         contains(dual(primal_cone(pair)), y, tol);
}

double duality_gap(const LPPair& pair, const Vector& x, const Vector& y) {
  require_pair_feasible(pair, x, y);
  return pair.c.dot(x) - pair.b.dot(y);
}

double complementary_slackness(const LPPair& pair, const Vector& x, const Vector& y) {
  require_pair_feasible(pair, x, y);
  return std::abs(y.dot(pair.A * x - pair.b));
}

double micp_residual(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v) {
  const Vector g = evaluate_G(micp, u, v);
  const Vector h = evaluate_H(micp, u, v);
  const Vector natural = v - project(micp.cone, v - h);
  return std::sqrt(g.squaredNorm() + natural.squaredNorm());
}

double cp_residual(const ComplementarityProblem& cp, const Vector& x) {
  const Vector fx = evaluate(cp, x);
  return (x - project(cp.cone, x - fx)).norm();
}

}  // namespace conicmcp
