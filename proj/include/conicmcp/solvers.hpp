#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "conicmcp/certification.hpp"
#include "conicmcp/problem.hpp"
#include "conicmcp/reformulation.hpp"

namespace conicmcp {

struct SolveOptions {
  // Fixed step. The iteration is guaranteed for monotone maps when
  // step * L < 1, L = lipschitz_estimate(...).
  double step = 0.1;
  int max_iter = 200000;
  double tol = 1e-10;  // natural-residual stopping threshold
  std::uint64_t seed = 0;
  int log_every = 100;
  double certificate_tol = 1e-6;  // used by solve_co
  // Overrides the seeded start (projected onto the cone). For MiCP solves it
  // sets v0; u0 stays 0.
  std::optional<Vector> initial_point;
};

enum class SolveStatus { Converged, IterationLimit };

const char* to_string(SolveStatus status);

struct TracePoint {
  int iteration = 0;
  double residual = 0.0;

  bool operator==(const TracePoint&) const = default;
};

struct SolveResult {
  Vector x;  // stacked point; for MiCP solves x = (u, v)
  double residual = 0.0;
  int iterations = 0;
  std::vector<TracePoint> trace;
  SolveStatus status = SolveStatus::IterationLimit;
  bool flipped_free_rows = false;  // see solve_cp
};

struct MicpSolveResult : SolveResult {
  Vector u;
  Vector v;
};

struct CoSolveResult {
  MicpSolveResult solve;
  Vector x;
  Vector y;
  double value = 0.0;
  Certificate certificate;
  ReformulationRecord record;

  bool passed() const noexcept {
    return solve.status == SolveStatus::Converged && certificate.passed();
  }
};

// Largest singular value of the (constant) Jacobian of F.
double lipschitz_estimate(const ComplementarityProblem& cp);

// 0.5 / L, inside the step * L < 1 convergence condition.
double recommended_step(const ComplementarityProblem& cp);
double recommended_step(const ConicProgram& prog);

// Extragradient projection iteration
//   x_half = P_K(x - step F(x)),  x <- P_K(x - step F(x_half))
// from x0 = P_K(standard-normal sample). Rows of F on free blocks of K may be
// negated before iterating (the solution set is unchanged because K* is {0}
// there); this is done when it turns an indefinite Jacobian into a monotone
// one, as happens for KKT systems. Throws DivergenceError on non-finite
// iterates.
SolveResult solve_cp(const ComplementarityProblem& cp, const SolveOptions& opts = {});

// Same iteration on the stacked system over Free(p) x C, started from
// u0 = 0, v0 = P_C(standard-normal sample).
MicpSolveResult solve_micp(const MixedComplementarityProblem& micp,
                           const SolveOptions& opts = {});

// co_to_micp, solve_micp, then kkt_certificate at opts.certificate_tol.
CoSolveResult solve_co(const ConicProgram& prog, const SolveOptions& opts = {});

}  // namespace conicmcp
