#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace conicmcp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultConeTol = 1e-9;

// Symbolic closed convex cone. Second-order cones are stored as (t, u) with
// the scalar t first: {(t, u) : t >= ||u||}.
class ConeSpec {
 public:
  enum class Kind { Zero, Free, NonnegOrthant, SecondOrder, Product };

  static ConeSpec zero(int dim);
  static ConeSpec free(int dim);
  static ConeSpec nonneg(int dim);
  static ConeSpec second_order(int dim);
  static ConeSpec product(std::vector<ConeSpec> factors);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const std::vector<ConeSpec>& factors() const noexcept { return factors_; }

  bool operator==(const ConeSpec& other) const = default;

  // Compact human-readable form, e.g. "nonneg(2) x soc(3)".
  std::string describe() const;

 private:
  ConeSpec(Kind kind, int dim, std::vector<ConeSpec> factors = {});

  Kind kind_;
  int dim_;
  std::vector<ConeSpec> factors_;
};

// A non-product piece of a cone together with its coordinate range.
struct LeafBlock {
  ConeSpec::Kind kind;
  int offset;
  int dim;
};

// Flattens nested products into their non-product leaves, in coordinate order.
std::vector<LeafBlock> leaf_blocks(const ConeSpec& cone);

// Throws DimensionError unless x has cone.dim() finite entries.
void require_point(const ConeSpec& cone, const Vector& x, const char* what = "x");

// Membership measure: contains(cone, x, tol) iff violation(cone, x) <= tol.
// Zero: ||x||, orthant: max(0, -min x_i), second-order: max(0, ||u|| - t),
// products take the maximum over factors.
double violation(const ConeSpec& cone, const Vector& x);

bool contains(const ConeSpec& cone, const Vector& x, double tol = kDefaultConeTol);

// x <=_K y, i.e. y - x in K.
bool precedes(const ConeSpec& cone, const Vector& x, const Vector& y,
              double tol = kDefaultConeTol);

ConeSpec dual(const ConeSpec& cone);

// Euclidean projection onto the cone.
Vector project(const ConeSpec& cone, const Vector& x);

double distance(const ConeSpec& cone, const Vector& x);

// Interior membership with a margin: orthant entries >= margin, second-order
// t >= ||u|| + margin, Free always, Zero never.
bool interior_contains(const ConeSpec& cone, const Vector& x, double margin);

// v in (-K*) cap x^perp, with the orthogonality test scaled by (1 + ||v|| ||x||).
// Requires contains(cone, x, tol).
bool normal_cone_contains(const ConeSpec& cone, const Vector& x, const Vector& v,
                          double tol = kDefaultConeTol);

// Semi-decision for d in cone(K - x): true iff x + t d lies in K for some t in
// {1, 1/2, ..., 2^-40}. Requires contains(cone, x, 0).
bool feasible_direction_contains(const ConeSpec& cone, const Vector& x, const Vector& d);

}  // namespace conicmcp
