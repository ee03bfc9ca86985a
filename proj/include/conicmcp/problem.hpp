#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conicmcp/cone.hpp"

namespace conicmcp {

// f(x) = c'x or f(x) = 1/2 x'Qx + c'x.
struct Objective {
  enum class Kind { Linear, Quadratic };

  static Objective linear(Vector c);
  static Objective quadratic(Matrix Q, Vector c);

  int dim() const noexcept { return static_cast<int>(c.size()); }

  Kind kind = Kind::Linear;
  Matrix Q;  // empty for Linear
  Vector c;

  bool operator==(const Objective& other) const;
};

double eval_objective(const Objective& obj, const Vector& x);
Vector gradient(const Objective& obj, const Vector& x);
// Constant Hessian; the zero matrix for linear objectives.
Matrix hessian(const Objective& obj);

// min f(x) subject to Ax = b, x in K.
struct ConicProgram {
  Objective objective;
  Matrix A;
  Vector b;
  ConeSpec cone;
  std::optional<Vector> slater_point;

  int p() const noexcept { return static_cast<int>(A.rows()); }
  int q() const noexcept { return static_cast<int>(A.cols()); }

  bool operator==(const ConicProgram& other) const;
};

// Find x in K with F(x) = Mx + r + grad phi(x) in K* and x perpendicular to F(x).
struct ComplementarityProblem {
  ConeSpec cone;
  Matrix M;
  Vector r;
  std::optional<Objective> phi;

  int dim() const noexcept { return cone.dim(); }

  bool operator==(const ComplementarityProblem& other) const;
};

Vector evaluate(const ComplementarityProblem& cp, const Vector& x);

// Find u free, v in C with G(u,v) = 0 and C ∋ v ⊥ H(u,v) ∈ C*, where
//   G(u,v) = Gu u + Gv v + g0,
//   H(u,v) = Hu u + Hv v + h0 + grad phi(v).
struct MixedComplementarityProblem {
  int p = 0;
  int q = 0;
  Matrix Gu, Gv;
  Vector g0;
  Matrix Hu, Hv;
  Vector h0;
  std::optional<Objective> phi;
  ConeSpec cone;

  bool operator==(const MixedComplementarityProblem& other) const;
};

Vector evaluate_G(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v);
Vector evaluate_H(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v);

// Linear conic pair. With role Primal the problem is
//   min c'x  s.t.  Ax - b in K          (K = cone)
// and with role Dual it is
//   max b'y  s.t.  A'y = c, y in cone   (stored as min -b'y; see objective_sign)
// A is m x n, c has length n, b and the cone have length m.
struct LPPair {
  enum class Role { Primal, Dual };

  Vector c;
  Matrix A;
  Vector b;
  ConeSpec cone;
  Role role = Role::Primal;

  int m() const noexcept { return static_cast<int>(A.rows()); }
  int n() const noexcept { return static_cast<int>(A.cols()); }
  double objective_sign() const noexcept { return role == Role::Dual ? -1.0 : 1.0; }

  bool operator==(const LPPair& other) const;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double value = 0.0;
  std::string detail;
  std::string field;
  bool shape = false;  // dimension-consistency check rather than a numeric one
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  // First failing check, if any.
  const ValidationCheck* first_failure() const;
};

inline constexpr double kRankRelTol = 1e-10;
inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

ValidationReport validate(const Objective& obj);
ValidationReport validate(const ConicProgram& prog);
ValidationReport validate(const ComplementarityProblem& cp);
ValidationReport validate(const MixedComplementarityProblem& micp);
ValidationReport validate(const LPPair& pair);

// Throws ValidationError (or DimensionError for shape failures) naming the
// first failing field.
template <typename Problem>
void require_valid(const Problem& problem);

bool is_feasible(const ConicProgram& prog, const Vector& x, double tol = kDefaultConeTol);

// Checks x_s as a Slater witness: ||A x_s - b|| <= 1e-9 and x_s in the
// interior of the cone with the given margin.
bool slater_check(const ConicProgram& prog, const Vector& x_s, double margin);

}  // namespace conicmcp
