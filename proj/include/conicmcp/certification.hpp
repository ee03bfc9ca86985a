#pragma once

#include <string>
#include <vector>

#include "conicmcp/problem.hpp"

namespace conicmcp {

inline constexpr double kDefaultCertificateTol = 1e-8;
inline constexpr double kPairFeasibilityTol = 1e-8;

// Optimality report for a candidate (x, y) of min f(x) s.t. Ax = b, x in K,
// built from the explicit conditions
//   Ax = b,  x in K,  h = grad f(x) - A'y in K*,  <x, h> = 0.
struct Certificate {
  double eq_residual = 0.0;       // ||Ax - b||
  double cone_violation = 0.0;    // violation(K, x)
  double cone_distance = 0.0;     // ||x - P_K(x)||
  double dual_violation = 0.0;    // violation(K*, h)
  double dual_distance = 0.0;     // ||h - P_K*(h)||
  double orthogonality = 0.0;     // <x, h>
  double orthogonality_bound = 0.0;  // tol * (1 + ||x|| ||h||)
  double objective = 0.0;
  double tol = kDefaultCertificateTol;

  bool eq_ok = false;
  bool cone_ok = false;
  bool dual_ok = false;
  bool orthogonality_ok = false;

  std::vector<std::string> notes;

  bool passed() const noexcept { return eq_ok && cone_ok && dual_ok && orthogonality_ok; }
  // ||Ax - b|| and cone violation combined (max).
  double primal_feas() const noexcept;
  double dual_feas() const noexcept { return dual_violation; }
};

Certificate kkt_certificate(const ConicProgram& prog, const Vector& x, const Vector& y,
                            double tol = kDefaultCertificateTol);

// c'x - b'y for a feasible primal/dual pair. Throws PreconditionError naming
// the infeasible side when either point violates its constraints by more
// than kPairFeasibilityTol.
double duality_gap(const LPPair& pair, const Vector& x, const Vector& y);

// |y'(Ax - b)| for a feasible pair.
double complementary_slackness(const LPPair& pair, const Vector& x, const Vector& y);

// Feasibility of each side, without throwing.
bool lp_primal_feasible(const LPPair& pair, const Vector& x, double tol = kPairFeasibilityTol);
bool lp_dual_feasible(const LPPair& pair, const Vector& y, double tol = kPairFeasibilityTol);

// Natural-map residual of the stacked MiCP system,
//   || (G(u,v), v - P_C(v - H(u,v))) ||_2,
// equal to cp_residual of micp_to_cp(micp) at (u, v).
double micp_residual(const MixedComplementarityProblem& micp, const Vector& u, const Vector& v);

// ||x - P_K(x - F(x))||.
double cp_residual(const ComplementarityProblem& cp, const Vector& x);

}  // namespace conicmcp
