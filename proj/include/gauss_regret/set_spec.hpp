#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "gauss_regret/common.hpp"

namespace gauss_regret {

struct SpecNode;

// Immutable description of a set A in R^n. Copies share the underlying tree.
class SetSpec {
 public:
  static SetSpec point(Vector v);
  static SetSpec finite_points(std::vector<Vector> points);
  static SetSpec ball(Vector center, double radius);
  static SetSpec box(Vector corner, Vector sides);
  static SetSpec segment(Vector a, Vector b);
  // Axes must be positive and non-increasing.
  static SetSpec ellipsoid(Vector center, Vector axes);
  static SetSpec ellipsoid(Vector axes);
  static SetSpec l1_ball(double alpha, int dim);
  static SetSpec convex_hull(std::vector<Vector> points);
  static SetSpec scale(double factor, SetSpec inner);
  static SetSpec translate(Vector v, SetSpec inner);
  static SetSpec product(std::vector<SetSpec> parts);
  static SetSpec set_union(std::vector<SetSpec> parts);
  static SetSpec minkowski_sum(std::vector<SetSpec> parts);

  int dim() const;
  bool is_convex() const;
  // Origin-symmetric (A = -A). Only reported when it can be certified.
  bool is_symmetric() const;
  const SpecNode& node() const { return *node_; }

  template <class T>
  const T* as() const;

 private:
  friend struct SpecBuilder;
  explicit SetSpec(std::shared_ptr<const SpecNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const SpecNode> node_;
};

namespace shape {
struct Point { Vector v; };
struct FinitePoints { std::vector<Vector> points; };
struct Ball { Vector center; double radius; };
struct Box { Vector corner; Vector sides; };
struct Segment { Vector a, b; };
struct Ellipsoid { Vector center; Vector axes; };
struct L1Ball { double alpha; int dim; };
struct ConvexHull { std::vector<Vector> points; };
struct Scale { double factor; SetSpec inner; };
struct Translate { Vector v; SetSpec inner; };
struct Product { std::vector<SetSpec> parts; };
struct Union { std::vector<SetSpec> parts; };
struct MinkowskiSum { std::vector<SetSpec> parts; };
}  // namespace shape

using SpecVariant =
    std::variant<shape::Point, shape::FinitePoints, shape::Ball, shape::Box, shape::Segment,
                 shape::Ellipsoid, shape::L1Ball, shape::ConvexHull, shape::Scale,
                 shape::Translate, shape::Product, shape::Union, shape::MinkowskiSum>;

struct SpecNode {
  SpecVariant v;
  int dim = 0;
  bool convex = false;
  bool symmetric = false;
  // Explicit point list when the set is finite (finite points, sums, unions,
  // scalings and products of finite sets).
  std::optional<std::vector<Vector>> finite;
  // Minkowski sums are resolved at construction into (ball centre, radius,
  // remaining set). mink_ok is false when no exact route exists.
  bool mink_ok = false;
  Vector mink_center;
  double mink_radius = 0.0;
  std::optional<SetSpec> mink_rest;
};

template <class T>
const T* SetSpec::as() const {
  return std::get_if<T>(&node_->v);
}

inline int SetSpec::dim() const { return node_->dim; }
inline bool SetSpec::is_convex() const { return node_->convex; }
inline bool SetSpec::is_symmetric() const { return node_->symmetric; }

// Point list of a finite set, or nullptr.
const std::vector<Vector>* finite_points_of(const SetSpec& s);

// Peels Scale/Translate wrappers: s = factor * base + offset.
struct AffineView {
  double factor = 1.0;
  Vector offset;
  SetSpec base;
};
AffineView peel_affine(const SetSpec& s);

std::string type_name(const SetSpec& s);

}  // namespace gauss_regret
