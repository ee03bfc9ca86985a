#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conicmcp/problem.hpp"

namespace conicmcp {

// One contiguous block of target variables and what it stands for in the
// source problem, e.g. {"u", "y (multiplier of Ax = b)", 0, p}.
struct VariableBlock {
  std::string target;
  std::string source;
  int offset = 0;
  int size = 0;

  bool operator==(const VariableBlock&) const = default;
};

struct ReformulationRecord {
  std::string source;
  std::string target;
  std::vector<VariableBlock> variable_map;
  int total_dim = 0;

  // Blocks tile [0, total_dim) in order.
  bool consistent() const;

  bool operator==(const ReformulationRecord&) const = default;
};

// KKT system of min f(x) s.t. Ax = b, x in K as a mixed complementarity
// problem with u = y free and v = x in K:
//   G(y, x) = b - Ax,   H(y, x) = grad f(x) - A'y.
// Throws ValidationError when the program fails validate().
MixedComplementarityProblem co_to_micp(const ConicProgram& prog);
ReformulationRecord co_to_micp_record(const ConicProgram& prog);

// Stacks F = (G, H) over Free(p) x C. Since Free(p)* = {0}, the CP forces G = 0.
ComplementarityProblem micp_to_cp(const MixedComplementarityProblem& micp);
ReformulationRecord micp_to_cp_record(const MixedComplementarityProblem& micp);

// G identically zero on R^p, H(u, v) = F(v), C = cp.cone.
MixedComplementarityProblem cp_to_micp(const ComplementarityProblem& cp, int p);
ReformulationRecord cp_to_micp_record(const ComplementarityProblem& cp, int p);

// Primal (min c'x, Ax - b in K) <-> dual (max b'y, A'y = c, y in K*). The
// cone of the result is dual(pair.cone) and the role flips.
LPPair build_conic_dual(const LPPair& pair);

// Standard form of a primal pair over the nonnegative orthant:
//   variables (x+, x-, s) >= 0, [A, -A, -I](x+, x-, s) = b, cost (c, -c, 0).
ConicProgram lp_primal_standard_form(const LPPair& pair);
// Recovers x = x+ - x- from a standard-form point.
Vector lp_primal_from_standard(const LPPair& pair, const Vector& standard_point);

// Primal pair over a general cone with a free x block:
//   variables (x, s) in Free(n) x K, [A, -I](x, s) = b, cost (c, 0).
ConicProgram lp_primal_as_co(const LPPair& pair);

// Dual-role pair as min -b'y s.t. A'y = c, y in cone.
ConicProgram lp_dual_as_co(const LPPair& pair);

struct MultiplierEstimate {
  Vector y;
  bool used_fallback = false;
};

// Least-squares multiplier for a candidate optimum: solves A'y = grad f(x)
// on the components where complementarity forces H(y, x) = 0 (inactive
// orthant entries, interior second-order blocks, the tangent space of active
// second-order blocks, free blocks). Falls back to `fallback` when the
// least-squares y leaves H outside K* by more than `tol`.
MultiplierEstimate recover_multiplier(const ConicProgram& prog, const Vector& x,
                                      const std::optional<Vector>& fallback = std::nullopt,
                                      double active_tol = 1e-7, double tol = 1e-6);

}  // namespace conicmcp
