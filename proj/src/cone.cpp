#include "conicmcp/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "conicmcp/error.hpp"

namespace conicmcp {

namespace {

void require_positive_dim(int dim) {
  if (dim < 1) throw DimensionError("cone dimension must be >= 1, got " + std::to_string(dim));
}

const char* kind_name(ConeSpec::Kind kind) {
  switch (kind) {
    case ConeSpec::Kind::Zero: return "zero";
    case ConeSpec::Kind::Free: return "free";
    case ConeSpec::Kind::NonnegOrthant: return "nonneg";
    case ConeSpec::Kind::SecondOrder: return "soc";
    case ConeSpec::Kind::Product: return "product";
  }
  return "?";
}

void collect_leaves(const ConeSpec& cone, int offset, std::vector<LeafBlock>& out) {
  if (cone.kind() != ConeSpec::Kind::Product) {
    out.push_back({cone.kind(), offset, cone.dim()});
    return;
  }
  for (const auto& f : cone.factors()) {
    collect_leaves(f, offset, out);
    offset += f.dim();
  }
}

double leaf_violation(ConeSpec::Kind kind, const Eigen::Ref<const Vector>& x) {
  switch (kind) {
    case ConeSpec::Kind::Zero: return x.norm();
    case ConeSpec::Kind::Free: return 0.0;
    case ConeSpec::Kind::NonnegOrthant: return std::max(0.0, -x.minCoeff());
    case ConeSpec::Kind::SecondOrder:
      return std::max(0.0, x.tail(x.size() - 1).norm() - x(0));
    case ConeSpec::Kind::Product: break;
  }
  return 0.0;
}

void leaf_project(ConeSpec::Kind kind, const Eigen::Ref<const Vector>& x,
                  Eigen::Ref<Vector> out) {
  switch (kind) {
    case ConeSpec::Kind::Zero: out.setZero(); return;
    case ConeSpec::Kind::Free: out = x; return;
    case ConeSpec::Kind::NonnegOrthant: out = x.cwiseMax(0.0); return;
    case ConeSpec::Kind::SecondOrder: {
      const double t = x(0);
      const auto u = x.tail(x.size() - 1);
      const double nu = u.norm();
      // Ties t == ||u|| keep x; t == -||u|| goes to the apex.
      if (t >= nu) {
        out = x;
      } else if (t <= -nu) {
        out.setZero();
      } else {
        const double scale = 0.5 * (t + nu);
        out(0) = scale;
        out.tail(x.size() - 1) = (scale / nu) * u;
      }
      return;
    }
    case ConeSpec::Kind::Product: break;
  }
}

bool leaf_interior(ConeSpec::Kind kind, const Eigen::Ref<const Vector>& x, double margin) {
  switch (kind) {
    case ConeSpec::Kind::Zero: return false;
    case ConeSpec::Kind::Free: return true;
    case ConeSpec::Kind::NonnegOrthant: return x.minCoeff() >= margin;
    case ConeSpec::Kind::SecondOrder: return x(0) >= x.tail(x.size() - 1).norm() + margin;
    case ConeSpec::Kind::Product: break;
  }
  return false;
}

}  // namespace

ConeSpec::ConeSpec(Kind kind, int dim, std::vector<ConeSpec> factors)
    : kind_(kind), dim_(dim), factors_(std::move(factors)) {}

ConeSpec ConeSpec::zero(int dim) {
  require_positive_dim(dim);
  return ConeSpec(Kind::Zero, dim);
}

ConeSpec ConeSpec::free(int dim) {
  require_positive_dim(dim);
  return ConeSpec(Kind::Free, dim);
}

ConeSpec ConeSpec::nonneg(int dim) {
  require_positive_dim(dim);
  return ConeSpec(Kind::NonnegOrthant, dim);
}

ConeSpec ConeSpec::second_order(int dim) {
  require_positive_dim(dim);
  return ConeSpec(Kind::SecondOrder, dim);
}

ConeSpec ConeSpec::product(std::vector<ConeSpec> factors) {
  if (factors.empty()) throw DimensionError("product cone needs at least one factor");
  const int dim = std::accumulate(factors.begin(), factors.end(), 0,
                                  [](int acc, const ConeSpec& f) { return acc + f.dim(); });
  return ConeSpec(Kind::Product, dim, std::move(factors));
}

std::string ConeSpec::describe() const {
  std::ostringstream os;
  if (kind_ != Kind::Product) {
    os << kind_name(kind_) << "(" << dim_ << ")";
    return os.str();
  }
  os << "[";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    os << factors_[i].describe();
  }
  os << "]";
  return os.str();
}

std::vector<LeafBlock> leaf_blocks(const ConeSpec& cone) {
  std::vector<LeafBlock> out;
  collect_leaves(cone, 0, out);
  return out;
}

void require_point(const ConeSpec& cone, const Vector& x, const char* what) {
  if (x.size() != cone.dim()) {
    throw DimensionError(std::string(what) + " has dimension " + std::to_string(x.size()) +
                             " but the cone " + cone.describe() + " has dimension " +
                             std::to_string(cone.dim()),
                         what);
  }
  if (!x.allFinite()) throw DimensionError(std::string(what) + " has non-finite entries", what);
}

double violation(const ConeSpec& cone, const Vector& x) {
  require_point(cone, x);
  double worst = 0.0;
  for (const auto& leaf : leaf_blocks(cone)) {
    worst = std::max(worst, leaf_violation(leaf.kind, x.segment(leaf.offset, leaf.dim)));
  }
  return worst;
}

bool contains(const ConeSpec& cone, const Vector& x, double tol) {
  return violation(cone, x) <= tol;
}

bool precedes(const ConeSpec& cone, const Vector& x, const Vector& y, double tol) {
  require_point(cone, x, "x");
  require_point(cone, y, "y");
  return contains(cone, y - x, tol);
}

ConeSpec dual(const ConeSpec& cone) {
  switch (cone.kind()) {
    case ConeSpec::Kind::Zero: return ConeSpec::free(cone.dim());
    case ConeSpec::Kind::Free: return ConeSpec::zero(cone.dim());
    case ConeSpec::Kind::NonnegOrthant:
    case ConeSpec::Kind::SecondOrder: return cone;
    case ConeSpec::Kind::Product: {
      std::vector<ConeSpec> duals;
      duals.reserve(cone.factors().size());
      for (const auto& f : cone.factors()) duals.push_back(dual(f));
      return ConeSpec::product(std::move(duals));
    }
  }
  return cone;
}

Vector project(const ConeSpec& cone, const Vector& x) {
  require_point(cone, x);
  Vector out(x.size());
  for (const auto& leaf : leaf_blocks(cone)) {
    leaf_project(leaf.kind, x.segment(leaf.offset, leaf.dim), out.segment(leaf.offset, leaf.dim));
  }
  return out;
}

double distance(const ConeSpec& cone, const Vector& x) { return (x - project(cone, x)).norm(); }

bool interior_contains(const ConeSpec& cone, const Vector& x, double margin) {
  require_point(cone, x);
  for (const auto& leaf : leaf_blocks(cone)) {
    if (!leaf_interior(leaf.kind, x.segment(leaf.offset, leaf.dim), margin)) return false;
  }
  return true;
}

bool normal_cone_contains(const ConeSpec& cone, const Vector& x, const Vector& v, double tol) {
  require_point(cone, v, "v");
  if (!contains(cone, x, tol)) {
    throw PreconditionError("normal cone queried at a point outside the cone");
  }
  if (!contains(dual(cone), -v, tol)) return false;
  return std::abs(v.dot(x)) <= tol * (1.0 + v.norm() * x.norm());
}

bool feasible_direction_contains(const ConeSpec& cone, const Vector& x, const Vector& d) {
  require_point(cone, d, "d");
  if (!contains(cone, x, 0.0)) {
    throw PreconditionError("feasible directions queried at a point outside the cone");
  }
  double step = 1.0;
  for (int k = 0; k <= 40; ++k, step *= 0.5) {
    if (contains(cone, x + step * d, 0.0)) return true;
  }
  return false;
}

}  // namespace conicmcp
