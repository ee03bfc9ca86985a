#include "conicmcp/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

constexpr double kVertexFeasTol = 1e-9;

// Calls fn(indices) for every size-k subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void require_lp_orthant(const ConicProgram& prog) {
  require_valid(prog);
  if (prog.objective.kind != Objective::Kind::Linear) {
    throw OracleError("vertex enumeration needs a linear objective");
  }
  if (prog.cone.kind() != ConeSpec::Kind::NonnegOrthant) {
    throw OracleError("vertex enumeration needs the nonnegative orthant, got " +
                      prog.cone.describe());
  }
  if (prog.q() > kMaxVertexDim) {
    throw OracleError("vertex enumeration is limited to q <= " + std::to_string(kMaxVertexDim));
  }
}

// Barrier value, gradient and Hessian over the leaves of the cone. Returns
// false when x is not strictly inside.
struct BarrierTerms {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

bool strictly_inside(const std::vector<LeafBlock>& leaves, const Vector& x) {
  for (const auto& leaf : leaves) {
    const auto xb = x.segment(leaf.offset, leaf.dim);
    switch (leaf.kind) {
      case ConeSpec::Kind::NonnegOrthant:
        if (!(xb.minCoeff() > 0.0)) return false;
        break;
      case ConeSpec::Kind::SecondOrder:
        if (!(xb(0) > 0.0) || !(xb(0) * xb(0) - xb.tail(leaf.dim - 1).squaredNorm() > 0.0)) {
          return false;
        }
        break;
      default: break;
    }
  }
  return true;
}

BarrierTerms barrier(const std::vector<LeafBlock>& leaves, const Vector& x) {
  const auto n = x.size();
  BarrierTerms out{0.0, Vector::Zero(n), Matrix::Zero(n, n)};
  for (const auto& leaf : leaves) {
    const auto xb = x.segment(leaf.offset, leaf.dim);
    if (leaf.kind == ConeSpec::Kind::NonnegOrthant) {
      for (int i = 0; i < leaf.dim; ++i) {
        out.value -= std::log(xb(i));
        out.grad(leaf.offset + i) = -1.0 / xb(i);
        out.hess(leaf.offset + i, leaf.offset + i) = 1.0 / (xb(i) * xb(i));
      }
    } else if (leaf.kind == ConeSpec::Kind::SecondOrder) {
      // -log(x'Jx) with J = diag(1, -1, ..., -1).
      Vector jx = -xb;
      jx(0) = xb(0);
      const double g = xb.dot(jx);
      Matrix J = -Matrix::Identity(leaf.dim, leaf.dim);
      J(0, 0) = 1.0;
      out.value -= std::log(g);
      out.grad.segment(leaf.offset, leaf.dim) = -2.0 * jx / g;
      out.hess.block(leaf.offset, leaf.offset, leaf.dim, leaf.dim) =
          -2.0 * J / g + 4.0 * jx * jx.transpose() / (g * g);
    }
  }
  return out;
}

double barrier_parameter(const std::vector<LeafBlock>& leaves) {
  double nu = 0.0;
  for (const auto& leaf : leaves) {
    if (leaf.kind == ConeSpec::Kind::NonnegOrthant) nu += leaf.dim;
    if (leaf.kind == ConeSpec::Kind::SecondOrder) nu += 2.0;
  }
  return nu;
}

}  // namespace

const char* to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::VertexEnumeration: return "vertex";
    case OracleMethod::GridSearch: return "grid";
    case OracleMethod::Barrier: return "barrier";
  }
  return "?";
}

std::vector<BasicSolution> lp_basic_solutions(const Matrix& A, const Vector& b) {
  const int p = static_cast<int>(A.rows());
  const int q = static_cast<int>(A.cols());
  std::vector<BasicSolution> out;
  for_each_combination(q, p, [&](const std::vector<int>& basis) {
    Matrix B(p, p);
    for (int j = 0; j < p; ++j) B.col(j) = A.col(basis[j]);
    const Eigen::FullPivLU<Matrix> lu(B);
    if (lu.rank() < p) return;
    const Vector xb = lu.solve(b);
    if ((B * xb - b).norm() > 1e-9 * (1.0 + b.norm())) return;
    if (xb.size() && xb.minCoeff() < -kVertexFeasTol) return;
    Vector x = Vector::Zero(q);
    for (int j = 0; j < p; ++j) x(basis[j]) = std::max(0.0, xb(j));
    out.push_back({basis, std::move(x), 0.0});
  });
  return out;
}

OracleResult lp_vertex_solve(const ConicProgram& prog) {
  require_lp_orthant(prog);
  const Vector& c = prog.objective.c;

  auto vertices = lp_basic_solutions(prog.A, prog.b);
  if (vertices.empty()) throw OracleError("no feasible basic solution: the program is infeasible");

  // Recession test: min c'd over {Ad = 0, 1'd = 1, d >= 0}.
  Matrix ray_A(prog.p() + 1, prog.q());
  ray_A << prog.A, Matrix::Ones(1, prog.q());
  Vector ray_b = Vector::Zero(prog.p() + 1);
  ray_b(prog.p()) = 1.0;
  for (const auto& ray : lp_basic_solutions(ray_A, ray_b)) {
    if (c.dot(ray.x) < -1e-9) throw OracleError("the program is unbounded below");
  }

  const BasicSolution* best = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  for (auto& v : vertices) {
    v.value = c.dot(v.x);
    if (!best || v.value < best_value - 1e-12 * (1.0 + std::abs(best_value))) {
      best_value = v.value;
      best = &v;
    }
  }
  return {best->value, best->x, OracleMethod::VertexEnumeration, 0.0, best->basis};
}

OracleResult grid_search_min(const ConicProgram& prog, const Box& box, double resolution) {
  require_valid(prog);
  const int q = prog.q();
  if (q > kMaxGridDim) throw OracleError("grid search is limited to q <= " + std::to_string(kMaxGridDim));
  if (!(resolution > 0.0)) throw OracleError("resolution must be positive");
  if (box.lower.size() != q || box.upper.size() != q) throw DimensionError("box does not match q", "box");

  std::vector<long> counts(q);
  for (int i = 0; i < q; ++i) {
    const double span = box.upper(i) - box.lower(i);
    if (span < 0.0) throw OracleError("box lower bound exceeds upper bound");
    counts[i] = static_cast<long>(std::floor(span / resolution + 1e-9)) + 1;
  }

  // Affine projection x - A'(AA')^{-1}(Ax - b).
  const Eigen::LLT<Matrix> gram(prog.A * prog.A.transpose());
  const Matrix correction = prog.A.transpose() * gram.solve(Matrix::Identity(prog.p(), prog.p()));

  OracleResult best{std::numeric_limits<double>::infinity(), Vector(), OracleMethod::GridSearch,
                    resolution, {}};
  std::vector<long> idx(q, 0);
  Vector x(q);
  while (true) {
    for (int i = 0; i < q; ++i) {
      x(i) = std::min(box.lower(i) + static_cast<double>(idx[i]) * resolution, box.upper(i));
    }
    const Vector z = x - correction * (prog.A * x - prog.b);
    if (contains(prog.cone, z, resolution)) {
      const double value = eval_objective(prog.objective, z);
      if (value < best.optimum_value) {
        best.optimum_value = value;
        best.optimizer = z;
      }
    }
    int i = 0;
    while (i < q && ++idx[i] == counts[i]) idx[i++] = 0;
    if (i == q) break;
  }
  if (best.optimizer.size() == 0) {
    throw OracleError("no feasible grid point; use a finer resolution or a larger box");
  }
  return best;
}

double grid_guarantee(const ConicProgram& prog, const Box& box, double resolution) {
  const auto& obj = prog.objective;
  double lip = obj.c.norm();
  if (obj.kind == Objective::Kind::Quadratic) {
    const double radius = box.lower.cwiseAbs().cwiseMax(box.upper.cwiseAbs()).norm();
    lip += Eigen::JacobiSVD<Matrix>(obj.Q).singularValues()(0) * radius;
  }
  return lip * resolution * std::sqrt(static_cast<double>(prog.q()));
}

OracleResult barrier_solve(const ConicProgram& prog, const Vector& interior_start,
                           double gap_tol) {
  require_valid(prog);
  require_point(prog.cone, interior_start, "interior_start");
  const int q = prog.q();
  const auto leaves = leaf_blocks(prog.cone);
  if (!strictly_inside(leaves, interior_start)) {
    throw OracleError("barrier start is not strictly inside the cone");
  }

  // Equality rows: Ax = b plus x_i = 0 on zero-cone blocks.
  std::vector<int> zero_coords;
  for (const auto& leaf : leaves) {
    if (leaf.kind == ConeSpec::Kind::Zero) {
      for (int i = 0; i < leaf.dim; ++i) zero_coords.push_back(leaf.offset + i);
    }
  }
  Matrix E(prog.p() + static_cast<int>(zero_coords.size()), q);
  E.setZero();
  E.topRows(prog.p()) = prog.A;
  for (std::size_t k = 0; k < zero_coords.size(); ++k) E(prog.p() + k, zero_coords[k]) = 1.0;

  Vector x = interior_start;
  for (int i : zero_coords) x(i) = 0.0;
  Vector target(E.rows());
  target << prog.b, Vector::Zero(static_cast<Eigen::Index>(zero_coords.size()));
  if ((E * x - target).norm() > 1e-8 * (1.0 + target.norm())) {
    throw OracleError("barrier start does not satisfy Ax = b");
  }

  const Eigen::JacobiSVD<Matrix> svd(E, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-12 * sv(0)) ++rank;
  }
  const Matrix N = svd.matrixV().rightCols(q - rank);

  const double nu = barrier_parameter(leaves);
  const Matrix f_hess = hessian(prog.objective);
  double tau = 1.0;
  for (int outer = 0; outer < 80; ++outer) {
    for (int inner = 0; inner < 500 && N.cols() > 0; ++inner) {
      const BarrierTerms bt = barrier(leaves, x);
      const Vector grad = tau * gradient(prog.objective, x) + bt.grad;
      const Matrix hess = tau * f_hess + bt.hess;
      const Matrix reduced = N.transpose() * hess * N;
      const Vector rhs = -N.transpose() * grad;
      Eigen::LDLT<Matrix> ldlt(reduced);
      Vector dz = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
        dz = reduced.completeOrthogonalDecomposition().solve(rhs);
      }
      const Vector dx = N * dz;
      const double decrement = std::sqrt(std::max(0.0, dx.dot(hess * dx)));
      if (decrement * decrement < 1e-20 * (1.0 + std::abs(tau))) break;
      double alpha = decrement < 0.25 ? 1.0 : 1.0 / (1.0 + decrement);
      while (!strictly_inside(leaves, x + alpha * dx) && alpha > 1e-20) alpha *= 0.5;
      x += alpha * dx;
      if (decrement < 1e-9) break;
    }
    if (nu == 0.0 || nu / tau < gap_tol) break;
    tau *= 8.0;
  }
  return {eval_objective(prog.objective, x), x, OracleMethod::Barrier, nu / tau, {}};
}

Vector finite_diff_gradient(const Objective& obj, const Vector& x, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = eval_objective(obj, probe);
    probe(i) = x(i) - h;
    const double down = eval_objective(obj, probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

Vector sample_in_cone(const ConeSpec& cone, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector z(cone.dim());
  for (const auto& leaf : leaf_blocks(cone)) {
    auto zb = z.segment(leaf.offset, leaf.dim);
    switch (leaf.kind) {
      case ConeSpec::Kind::Zero: zb.setZero(); break;
      case ConeSpec::Kind::Free:
        for (int i = 0; i < leaf.dim; ++i) zb(i) = normal(rng);
        break;
      case ConeSpec::Kind::NonnegOrthant:
        for (int i = 0; i < leaf.dim; ++i) zb(i) = std::abs(normal(rng));
        break;
      case ConeSpec::Kind::SecondOrder: {
        for (int i = 1; i < leaf.dim; ++i) zb(i) = normal(rng);
        zb(0) = zb.tail(leaf.dim - 1).norm() + std::abs(normal(rng));
        break;
      }
      case ConeSpec::Kind::Product: break;
    }
  }
  return z;
}

bool projection_optimality_check(const ConeSpec& cone, const Vector& x, const Vector& candidate,
                                 int samples, std::uint64_t seed) {
  require_point(cone, x, "x");
  require_point(cone, candidate, "candidate");
  if (!contains(cone, candidate, 1e-9)) {
    throw PreconditionError("projection candidate is not in the cone");
  }
  const Vector residual = x - candidate;
  const double bound = 1e-9 * (1.0 + x.norm());
  auto violates = [&](const Vector& z) { return residual.dot(z - candidate) > bound; };

  if (violates(Vector::Zero(cone.dim())) || violates(2.0 * candidate)) return false;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    if (violates(sample_in_cone(cone, rng))) return false;
  }
  return true;
}

}  // namespace conicmcp
