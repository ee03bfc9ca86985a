#include "conicmcp/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <random>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

Matrix jacobian(const ComplementarityProblem& cp) {
  Matrix J = cp.M;
  if (cp.phi) J += hessian(*cp.phi);
  return J;
}

double min_sym_eigenvalue(const Matrix& J) {
  if (J.size() == 0) return 0.0;
  const Matrix sym = 0.5 * (J + J.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

// +1 everywhere, or -1 on free coordinates when that makes the map monotone
// and the original is not.
Vector row_orientation(const ComplementarityProblem& cp, bool& flipped) {
  Vector sign = Vector::Ones(cp.dim());
  flipped = false;
  bool has_free = false;
  for (const auto& leaf : leaf_blocks(cp.cone)) {
    if (leaf.kind == ConeSpec::Kind::Free) {
      sign.segment(leaf.offset, leaf.dim).setConstant(-1.0);
      has_free = true;
    }
  }
  if (!has_free) return Vector::Ones(cp.dim());

  const Matrix J = jacobian(cp);
  constexpr double kMonotoneTol = 1e-10;
  if (min_sym_eigenvalue(J) >= -kMonotoneTol) return Vector::Ones(cp.dim());
  if (min_sym_eigenvalue(sign.asDiagonal() * J) >= -kMonotoneTol) {
    flipped = true;
    return sign;
  }
  return Vector::Ones(cp.dim());
}

Vector normal_sample(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = normal(rng);
  return out;
}

void require_options(const SolveOptions& opts) {
  if (!(opts.step > 0.0)) throw ValidationError("step must be positive", "step");
  if (!(opts.tol > 0.0)) throw ValidationError("tol must be positive", "tol");
  if (opts.max_iter < 1) throw ValidationError("max_iter must be positive", "max_iter");
  if (opts.log_every < 1) throw ValidationError("log_every must be positive", "log_every");
}

SolveResult iterate(const ComplementarityProblem& cp, Vector x, const SolveOptions& opts) {
  SolveResult result;
  const Vector sign = row_orientation(cp, result.flipped_free_rows);
  const double step = opts.step;

  for (int k = 0;; ++k) {
    const Vector fx = evaluate(cp, x);
    const double residual = (x - project(cp.cone, x - fx)).norm();
    const bool done = residual <= opts.tol || k == opts.max_iter;
    if (k % opts.log_every == 0 || done) result.trace.push_back({k, residual});
    if (done) {
      result.residual = residual;
      result.iterations = k;
      result.status = residual <= opts.tol ? SolveStatus::Converged : SolveStatus::IterationLimit;
      break;
    }
    const Vector trial = x - step * sign.cwiseProduct(fx);
    if (trial.allFinite()) {
      const Vector half = project(cp.cone, trial);
      x = x - step * sign.cwiseProduct(evaluate(cp, half));
    } else {
      x = trial;
    }
    if (!x.allFinite()) {
      throw DivergenceError("iterate became non-finite at iteration " + std::to_string(k + 1) +
                            "; retry with a smaller step (L = " +
                            std::to_string(lipschitz_estimate(cp)) + ")");
    }
    x = project(cp.cone, x);
  }
  result.x = std::move(x);
  return result;
}

}  // namespace

const char* to_string(SolveStatus status) {
  return status == SolveStatus::Converged ? "converged" : "iteration_limit";
}

double lipschitz_estimate(const ComplementarityProblem& cp) {
  const Matrix J = jacobian(cp);
  if (J.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(J).singularValues()(0);
}

double recommended_step(const ComplementarityProblem& cp) {
  const double lip = lipschitz_estimate(cp);
  return lip > 0.0 ? 0.5 / lip : SolveOptions{}.step;
}

double recommended_step(const ConicProgram& prog) {
  return recommended_step(micp_to_cp(co_to_micp(prog)));
}

SolveResult solve_cp(const ComplementarityProblem& cp, const SolveOptions& opts) {
  require_valid(cp);
  require_options(opts);
  const Vector start = opts.initial_point ? *opts.initial_point : normal_sample(cp.dim(), opts.seed);
  require_point(cp.cone, start, "initial_point");
  return iterate(cp, project(cp.cone, start), opts);
}

MicpSolveResult solve_micp(const MixedComplementarityProblem& micp, const SolveOptions& opts) {
  require_options(opts);
  const ComplementarityProblem stacked = micp_to_cp(micp);
  Vector x0 = Vector::Zero(micp.p + micp.q);
  const Vector start = opts.initial_point ? *opts.initial_point : normal_sample(micp.q, opts.seed);
  require_point(micp.cone, start, "initial_point");
  x0.tail(micp.q) = project(micp.cone, start);

  MicpSolveResult result;
  static_cast<SolveResult&>(result) = iterate(stacked, std::move(x0), opts);
  result.u = result.x.head(micp.p);
  result.v = result.x.tail(micp.q);
  return result;
}

CoSolveResult solve_co(const ConicProgram& prog, const SolveOptions& opts) {
  CoSolveResult out;
  out.solve = solve_micp(co_to_micp(prog), opts);
  out.x = out.solve.v;
  out.y = out.solve.u;
  out.value = eval_objective(prog.objective, out.x);
  out.certificate = kkt_certificate(prog, out.x, out.y, opts.certificate_tol);
  out.record = co_to_micp_record(prog);
  return out;
}

}  // namespace conicmcp
