#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "conicmcp/problem.hpp"

namespace conicmcp {

enum class OracleMethod { VertexEnumeration, GridSearch, Barrier };

const char* to_string(OracleMethod method);

struct OracleResult {
  double optimum_value = 0.0;
  Vector optimizer;
  OracleMethod method = OracleMethod::VertexEnumeration;
  // Grid spacing for GridSearch, final barrier gap bound for Barrier, 0 otherwise.
  double resolution = 0.0;
  std::vector<int> basis;  // VertexEnumeration only
};

struct BasicSolution {
  std::vector<int> basis;
  Vector x;
  double value = 0.0;
};

inline constexpr int kMaxVertexDim = 12;
inline constexpr int kMaxGridDim = 4;

// All feasible basic solutions of {Ax = b, x >= 0}, bases in lexicographic
// order. Rank-deficient bases are skipped.
std::vector<BasicSolution> lp_basic_solutions(const Matrix& A, const Vector& b);

// Exact LP oracle for a linear objective over the nonnegative orthant with
// q <= 12. Ties go to the lexicographically smallest basis. Throws
// OracleError for infeasible or unbounded programs.
OracleResult lp_vertex_solve(const ConicProgram& prog);

struct Box {
  Vector lower;
  Vector upper;
};

// Dense grid over the box, each point projected onto {Ax = b} and kept when
// it lies in the cone up to `resolution`. q <= 4.
OracleResult grid_search_min(const ConicProgram& prog, const Box& box, double resolution);

// Accuracy bound of grid_search_min: (max ||grad f|| on the box) * resolution * sqrt(q).
double grid_guarantee(const ConicProgram& prog, const Box& box, double resolution);

// Log-barrier path following with equality-constrained Newton steps, started
// from a strictly feasible point (a Slater witness). Stops once the barrier
// gap bound nu / tau falls below gap_tol.
OracleResult barrier_solve(const ConicProgram& prog, const Vector& interior_start,
                           double gap_tol = 1e-10);

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
Vector finite_diff_gradient(const Objective& obj, const Vector& x, double h);

// Random element of the cone: orthant |normal|, second-order (||u|| + |s|, u),
// free normal, zero 0.
Vector sample_in_cone(const ConeSpec& cone, std::mt19937_64& rng);

// Variational test of candidate = P_K(x): <x - candidate, z - candidate> <=
// 1e-9 (1 + ||x||) for z = 0, z = 2 candidate and `samples` random cone points.
bool projection_optimality_check(const ConeSpec& cone, const Vector& x, const Vector& candidate,
                                 int samples, std::uint64_t seed = 0);

}  // namespace conicmcp
