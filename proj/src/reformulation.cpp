#include "conicmcp/reformulation.hpp"

#include <Eigen/QR>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

Objective pad_front(const Objective& obj, int p) {
  const int q = obj.dim();
  Vector c = Vector::Zero(p + q);
  c.tail(q) = obj.c;
  if (obj.kind == Objective::Kind::Linear) return Objective::linear(std::move(c));
  Matrix Q = Matrix::Zero(p + q, p + q);
  Q.bottomRightCorner(q, q) = obj.Q;
  return Objective::quadratic(std::move(Q), std::move(c));
}

}  // namespace

bool ReformulationRecord::consistent() const {
  int next = 0;
  for (const auto& block : variable_map) {
    if (block.offset != next || block.size < 0) return false;
    next += block.size;
  }
  return next == total_dim;
}

MixedComplementarityProblem co_to_micp(const ConicProgram& prog) {
  require_valid(prog);
  const int p = prog.p();
  const int q = prog.q();
  return MixedComplementarityProblem{
      .p = p,
      .q = q,
      .Gu = Matrix::Zero(p, p),
      .Gv = -prog.A,
      .g0 = prog.b,
      .Hu = -prog.A.transpose(),
      .Hv = Matrix::Zero(q, q),
      .h0 = Vector::Zero(q),
      .phi = prog.objective,
      .cone = prog.cone,
  };
}

ReformulationRecord co_to_micp_record(const ConicProgram& prog) {
  return {"co", "micp",
          {{"u", "y (multiplier of Ax = b)", 0, prog.p()}, {"v", "x", prog.p(), prog.q()}},
          prog.p() + prog.q()};
}

ComplementarityProblem micp_to_cp(const MixedComplementarityProblem& micp) {
  require_valid(micp);
  const int p = micp.p;
  const int q = micp.q;
  const int n = p + q;
  Matrix M(n, n);
  M << micp.Gu, micp.Gv, micp.Hu, micp.Hv;
  Vector r(n);
  r << micp.g0, micp.h0;
  std::optional<Objective> phi;
  if (micp.phi) phi = pad_front(*micp.phi, p);
  ConeSpec cone = p > 0 ? ConeSpec::product({ConeSpec::free(p), micp.cone}) : micp.cone;
  return ComplementarityProblem{std::move(cone), std::move(M), std::move(r), std::move(phi)};
}

ReformulationRecord micp_to_cp_record(const MixedComplementarityProblem& micp) {
  return {"micp", "cp", {{"x[0:p]", "u", 0, micp.p}, {"x[p:n]", "v", micp.p, micp.q}},
          micp.p + micp.q};
}

MixedComplementarityProblem cp_to_micp(const ComplementarityProblem& cp, int p) {
  require_valid(cp);
  if (p < 0) throw DimensionError("p must be nonnegative", "p");
  const int q = cp.dim();
  return MixedComplementarityProblem{
      .p = p,
      .q = q,
      .Gu = Matrix::Zero(p, p),
      .Gv = Matrix::Zero(p, q),
      .g0 = Vector::Zero(p),
      .Hu = Matrix::Zero(q, p),
      .Hv = cp.M,
      .h0 = cp.r,
      .phi = cp.phi,
      .cone = cp.cone,
  };
}

ReformulationRecord cp_to_micp_record(const ComplementarityProblem& cp, int p) {
  return {"cp", "micp", {{"u", "unused (G = 0)", 0, p}, {"v", "x", p, cp.dim()}}, p + cp.dim()};
}

LPPair build_conic_dual(const LPPair& pair) {
  require_valid(pair);
  return LPPair{pair.c, pair.A, pair.b, dual(pair.cone),
                pair.role == LPPair::Role::Primal ? LPPair::Role::Dual : LPPair::Role::Primal};
}

ConicProgram lp_primal_standard_form(const LPPair& pair) {
  require_valid(pair);
  if (pair.role != LPPair::Role::Primal) throw ValidationError("expected a primal pair", "role");
  if (pair.cone.kind() != ConeSpec::Kind::NonnegOrthant) {
    throw ValidationError("standard form needs the nonnegative orthant", "cone");
  }
  const int m = pair.m();
  const int n = pair.n();
  Matrix A(m, 2 * n + m);
  A << pair.A, -pair.A, -Matrix::Identity(m, m);
  Vector c(2 * n + m);
  c << pair.c, -pair.c, Vector::Zero(m);
  return ConicProgram{Objective::linear(std::move(c)), std::move(A), pair.b,
                      ConeSpec::nonneg(2 * n + m), std::nullopt};
}

Vector lp_primal_from_standard(const LPPair& pair, const Vector& standard_point) {
  const int n = pair.n();
  if (standard_point.size() != 2 * n + pair.m()) {
    throw DimensionError("standard-form point has the wrong dimension", "x");
  }
  return standard_point.head(n) - standard_point.segment(n, n);
}

ConicProgram lp_primal_as_co(const LPPair& pair) {
  require_valid(pair);
  if (pair.role != LPPair::Role::Primal) throw ValidationError("expected a primal pair", "role");
  const int m = pair.m();
  const int n = pair.n();
  Matrix A(m, n + m);
  A << pair.A, -Matrix::Identity(m, m);
  Vector c = Vector::Zero(n + m);
  c.head(n) = pair.c;
  return ConicProgram{Objective::linear(std::move(c)), std::move(A), pair.b,
                      ConeSpec::product({ConeSpec::free(n), pair.cone}), std::nullopt};
}

ConicProgram lp_dual_as_co(const LPPair& pair) {
  require_valid(pair);
  if (pair.role != LPPair::Role::Dual) throw ValidationError("expected a dual pair", "role");
  return ConicProgram{Objective::linear(-pair.b), pair.A.transpose(), pair.c, pair.cone,
                      std::nullopt};
}

MultiplierEstimate recover_multiplier(const ConicProgram& prog, const Vector& x,
                                      const std::optional<Vector>& fallback, double active_tol,
                                      double tol) {
  require_valid(prog);
  require_point(prog.cone, x);
  const int q = prog.q();
  const Vector g = gradient(prog.objective, x);
  const double thr = active_tol * (1.0 + x.norm());

  // Rows of E select the linear conditions E (g - A'y) = 0.
  std::vector<Vector> rows;
  auto unit = [q](int i) {
    Vector e = Vector::Zero(q);
    e(i) = 1.0;
    return e;
  };
  for (const auto& leaf : leaf_blocks(prog.cone)) {
    const auto xb = x.segment(leaf.offset, leaf.dim);
    switch (leaf.kind) {
      case ConeSpec::Kind::Zero: break;
      case ConeSpec::Kind::Free:
        for (int i = 0; i < leaf.dim; ++i) rows.push_back(unit(leaf.offset + i));
        break;
      case ConeSpec::Kind::NonnegOrthant:
        for (int i = 0; i < leaf.dim; ++i) {
          if (xb(i) > thr) rows.push_back(unit(leaf.offset + i));
        }
        break;
      case ConeSpec::Kind::SecondOrder: {
        if (xb.norm() <= thr) break;
        const double t = xb(0);
        const double nu = xb.tail(leaf.dim - 1).norm();
        if (t - nu > thr * (1.0 + t)) {
          for (int i = 0; i < leaf.dim; ++i) rows.push_back(unit(leaf.offset + i));
          break;
        }
        // Boundary: H must be a nonnegative multiple of the reflection (t, -u).
        Vector w(leaf.dim);
        w << t, -xb.tail(leaf.dim - 1);
        w.normalize();
        const Matrix tangent = Matrix::Identity(leaf.dim, leaf.dim) - w * w.transpose();
        for (int i = 0; i < leaf.dim; ++i) {
          Vector row = Vector::Zero(q);
          row.segment(leaf.offset, leaf.dim) = tangent.row(i).transpose();
          rows.push_back(std::move(row));
        }
        break;
      }
      case ConeSpec::Kind::Product: break;
    }
  }

  Vector y = Vector::Zero(prog.p());
  if (!rows.empty()) {
    Matrix E(static_cast<Eigen::Index>(rows.size()), q);
    for (std::size_t i = 0; i < rows.size(); ++i) E.row(static_cast<Eigen::Index>(i)) = rows[i];
    const Matrix lhs = E * prog.A.transpose();
    y = lhs.completeOrthogonalDecomposition().solve(E * g);
  }
  const Vector h = g - prog.A.transpose() * y;
  if (fallback && !contains(dual(prog.cone), h, tol)) return {*fallback, true};
  return {y, false};
}

}  // namespace conicmcp
