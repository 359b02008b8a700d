#include "gauss_regret/set_spec.hpp"

#include <string>

#include "gauss_regret/errors.hpp"

namespace gauss_regret {
namespace {

constexpr std::size_t kMaxMaterialized = 200000;

void check_vector(const Vector& v, const char* what) {
  if (v.size() < 1) throw InvalidSpec(std::string(what) + ": empty vector");
  if (!v.allFinite()) throw InvalidSpec(std::string(what) + ": non-finite entry");
}

void check_points(const std::vector<Vector>& pts, const char* what) {
  if (pts.empty()) throw InvalidSpec(std::string(what) + ": needs at least one point");
  for (const auto& p : pts) {
    check_vector(p, what);
    if (p.size() != pts.front().size())
      throw DimensionMismatch(std::string(what) + ": points of different dimension");
  }
}

bool near_zero(const Vector& v) { return v.cwiseAbs().maxCoeff() <= 1e-12; }

bool symmetric_points(const std::vector<Vector>& pts) {
  for (const auto& p : pts) {
    bool found = false;
    for (const auto& q : pts) {
      if ((p + q).cwiseAbs().maxCoeff() <= 1e-12) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool all_equal(const std::vector<Vector>& pts) {
  for (const auto& p : pts)
    if ((p - pts.front()).cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

}  // namespace

struct SpecBuilder {
  static SetSpec make(SpecNode n) { return SetSpec(std::make_shared<const SpecNode>(std::move(n))); }
};

SetSpec SetSpec::point(Vector v) {
  check_vector(v, "point");
  SpecNode n;
  n.dim = static_cast<int>(v.size());
  n.convex = true;
  n.symmetric = near_zero(v);
  n.finite = std::vector<Vector>{v};
  n.v = shape::Point{std::move(v)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::finite_points(std::vector<Vector> points) {
  check_points(points, "finite_points");
  SpecNode n;
  n.dim = static_cast<int>(points.front().size());
  n.convex = all_equal(points);
  n.symmetric = symmetric_points(points);
  n.finite = points;
  n.v = shape::FinitePoints{std::move(points)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::ball(Vector center, double radius) {
  check_vector(center, "ball");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidSpec("ball: radius must be positive");
  SpecNode n;
  n.dim = static_cast<int>(center.size());
  n.convex = true;
  n.symmetric = near_zero(center);
  n.v = shape::Ball{std::move(center), radius};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::box(Vector corner, Vector sides) {
  check_vector(corner, "box");
  check_vector(sides, "box");
  if (corner.size() != sides.size()) throw DimensionMismatch("box: corner and sides differ in length");
  if ((sides.array() < 0.0).any()) throw InvalidSpec("box: sides must be non-negative");
  SpecNode n;
  n.dim = static_cast<int>(corner.size());
  n.convex = true;
  n.symmetric = near_zero(corner + 0.5 * sides);
  n.v = shape::Box{std::move(corner), std::move(sides)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::segment(Vector a, Vector b) {
  check_vector(a, "segment");
  check_vector(b, "segment");
  if (a.size() != b.size()) throw DimensionMismatch("segment: endpoints differ in dimension");
  SpecNode n;
  n.dim = static_cast<int>(a.size());
  n.convex = true;
  n.symmetric = near_zero(a + b);
  n.v = shape::Segment{std::move(a), std::move(b)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::ellipsoid(Vector center, Vector axes) {
  check_vector(center, "ellipsoid");
  check_vector(axes, "ellipsoid");
  if (center.size() != axes.size()) throw DimensionMismatch("ellipsoid: center and axes differ in length");
  for (Eigen::Index i = 0; i < axes.size(); ++i) {
    if (!(axes[i] > 0.0)) throw InvalidSpec("ellipsoid: axes must be positive");
    if (i > 0 && axes[i] > axes[i - 1]) throw InvalidSpec("ellipsoid: axes must be non-increasing");
  }
  SpecNode n;
  n.dim = static_cast<int>(axes.size());
  n.convex = true;
  n.symmetric = near_zero(center);
  n.v = shape::Ellipsoid{std::move(center), std::move(axes)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::ellipsoid(Vector axes) {
  Vector c = Vector::Zero(axes.size());
  return ellipsoid(std::move(c), std::move(axes));
}

SetSpec SetSpec::l1_ball(double alpha, int dim) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidSpec("l1_ball: alpha must be positive");
  if (dim < 1) throw InvalidSpec("l1_ball: dim must be at least 1");
  SpecNode n;
  n.dim = dim;
  n.convex = true;
  n.symmetric = true;
  n.v = shape::L1Ball{alpha, dim};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::convex_hull(std::vector<Vector> points) {
  check_points(points, "convex_hull");
  SpecNode n;
  n.dim = static_cast<int>(points.front().size());
  n.convex = true;
  n.symmetric = symmetric_points(points);
  if (all_equal(points)) n.finite = std::vector<Vector>{points.front()};
  n.v = shape::ConvexHull{std::move(points)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::scale(double factor, SetSpec inner) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidSpec("scale: factor must be positive");
  SpecNode n;
  n.dim = inner.dim();
  n.convex = inner.is_convex();
  n.symmetric = inner.is_symmetric();
  if (const auto* f = finite_points_of(inner)) {
    std::vector<Vector> pts;
    pts.reserve(f->size());
    for (const auto& p : *f) pts.push_back(factor * p);
    n.finite = std::move(pts);
  }
  n.v = shape::Scale{factor, std::move(inner)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::translate(Vector v, SetSpec inner) {
  check_vector(v, "translate");
  if (v.size() != inner.dim()) throw DimensionMismatch("translate: offset dimension differs from inner set");
  SpecNode n;
  n.dim = inner.dim();
  n.convex = inner.is_convex();
  n.symmetric = inner.is_symmetric() && near_zero(v);
  if (const auto* f = finite_points_of(inner)) {
    std::vector<Vector> pts;
    pts.reserve(f->size());
    for (const auto& p : *f) pts.push_back(p + v);
    n.finite = std::move(pts);
  }
  n.v = shape::Translate{std::move(v), std::move(inner)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::product(std::vector<SetSpec> parts) {
  if (parts.empty()) throw InvalidSpec("product: needs at least one part");
  SpecNode n;
  n.convex = true;
  n.symmetric = true;
  bool finite = true;
  std::size_t count = 1;
  for (const auto& p : parts) {
    n.dim += p.dim();
    n.convex = n.convex && p.is_convex();
    n.symmetric = n.symmetric && p.is_symmetric();
    const auto* f = finite_points_of(p);
    finite = finite && f != nullptr;
    if (f) count *= f->size();
  }
  if (finite && count <= kMaxMaterialized) {
    std::vector<Vector> pts{Vector(0)};
    for (const auto& p : parts) {
      std::vector<Vector> next;
      for (const auto& a : pts)
        for (const auto& b : *finite_points_of(p)) {
          Vector c(a.size() + b.size());
          c << a, b;
          next.push_back(std::move(c));
        }
      pts = std::move(next);
    }
    n.finite = std::move(pts);
  }
  n.v = shape::Product{std::move(parts)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::set_union(std::vector<SetSpec> parts) {
  if (parts.empty()) throw InvalidSpec("union: needs at least one part");
  SpecNode n;
  n.dim = parts.front().dim();
  n.convex = parts.size() == 1 && parts.front().is_convex();
  n.symmetric = true;
  bool finite = true;
  for (const auto& p : parts) {
    if (p.dim() != n.dim) throw DimensionMismatch("union: parts differ in dimension");
    n.symmetric = n.symmetric && p.is_symmetric();
    finite = finite && finite_points_of(p) != nullptr;
  }
  if (finite) {
    std::vector<Vector> pts;
    for (const auto& p : parts)
      for (const auto& q : *finite_points_of(p)) pts.push_back(q);
    n.convex = all_equal(pts);
    n.finite = std::move(pts);
  }
  n.v = shape::Union{std::move(parts)};
  return SpecBuilder::make(std::move(n));
}

SetSpec SetSpec::minkowski_sum(std::vector<SetSpec> parts) {
  if (parts.empty()) throw InvalidSpec("minkowski_sum: needs at least one part");
  SpecNode n;
  n.dim = parts.front().dim();
  n.convex = true;
  n.symmetric = true;
  bool finite = true;
  std::size_t count = 1;
  for (const auto& p : parts) {
    if (p.dim() != n.dim) throw DimensionMismatch("minkowski_sum: parts differ in dimension");
    n.convex = n.convex && p.is_convex();
    n.symmetric = n.symmetric && p.is_symmetric();
    const auto* f = finite_points_of(p);
    finite = finite && f != nullptr;
    if (f) count *= f->size();
  }
  if (finite && count <= kMaxMaterialized) {
    std::vector<Vector> pts{Vector::Zero(n.dim)};
    for (const auto& p : parts) {
      std::vector<Vector> next;
      for (const auto& a : pts)
        for (const auto& b : *finite_points_of(p)) next.push_back(a + b);
      pts = std::move(next);
    }
    n.convex = all_equal(pts);
    n.finite = std::move(pts);
  }
  if (!n.finite) {
    // Balls add up to one ball; what is left must be a single set or a finite
    // sumset.
    n.mink_center = Vector::Zero(n.dim);
    std::vector<SetSpec> rest;
    for (const auto& p : parts) {
      if (const auto* b = p.as<shape::Ball>()) {
        n.mink_center += b->center;
        n.mink_radius += b->radius;
      } else {
        rest.push_back(p);
      }
    }
    if (rest.size() == 1) {
      n.mink_rest = rest.front();
    } else if (rest.size() > 1) {
      bool all_finite = true;
      for (const auto& p : rest) all_finite = all_finite && finite_points_of(p) != nullptr;
      if (all_finite) {
        SetSpec sum = SetSpec::minkowski_sum(rest);
        if (finite_points_of(sum)) n.mink_rest = sum;
      }
    }
    n.mink_ok = rest.empty() || n.mink_rest.has_value();
  }
  n.v = shape::MinkowskiSum{std::move(parts)};
  return SpecBuilder::make(std::move(n));
}

const std::vector<Vector>* finite_points_of(const SetSpec& s) {
  const auto& f = s.node().finite;
  return f ? &*f : nullptr;
}

AffineView peel_affine(const SetSpec& s) {
  AffineView view{1.0, Vector::Zero(s.dim()), s};
  // Walk down: the set is factor * base + offset.
  while (true) {
    if (const auto* sc = view.base.as<shape::Scale>()) {
      view.factor *= sc->factor;
      view.base = sc->inner;
    } else if (const auto* tr = view.base.as<shape::Translate>()) {
      view.offset += view.factor * tr->v;
      view.base = tr->inner;
    } else {
      return view;
    }
  }
}

std::string type_name(const SetSpec& s) {
  static const char* names[] = {"point",     "finite_points", "ball",    "box",
                                "segment",   "ellipsoid",     "l1_ball", "convex_hull",
                                "scale",     "translate",     "product", "union",
                                "minkowski_sum"};
  return names[s.node().v.index()];
}

}  // namespace gauss_regret
