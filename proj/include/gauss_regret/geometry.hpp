#pragma once

#include <optional>
#include <vector>

#include "gauss_regret/set_spec.hpp"

namespace gauss_regret {

// Euclidean distance from x to the set.
double dist(const SetSpec& s, const VecRef& x);

// Nearest point of the (closed) set. Ties resolve to the first part / point.
Vector project(const SetSpec& s, const VecRef& x);

// Support function h_A(x) = sup_{θ∈A} <θ, x>.
double support(const SetSpec& s, const VecRef& x);

// sup_{θ∈A} [<θ, x> - |θ|^2 / 2] = (|x|^2 - dist(x, A)^2) / 2.
double sup_quadratic(const SetSpec& s, const VecRef& x);

struct Diameter {
  double value = 0.0;
  bool exact = true;  // false: an upper bound from bounding balls
};
Diameter diameter(const SetSpec& s);

struct BoundingBox {
  Vector lo, hi;
};
BoundingBox bounding_box(const SetSpec& s);

// n-dimensional volume, when a closed form exists (throws Unsupported otherwise).
double volume(const SetSpec& s);

// Points of A that are eps-dense in A: every θ in A lies within eps of one of
// them. Built from projections of a lattice; throws Unsupported when more than
// max_points would be needed.
std::vector<Vector> dense_sample(const SetSpec& s, double eps, std::size_t max_points);

// Foot point of the projection onto an axis-aligned ellipsoid centred at the
// origin, together with the Lagrange multiplier mu >= 0.
struct EllipsoidFoot {
  Vector foot;
  double mu = 0.0;
  int iterations = 0;
};
EllipsoidFoot ellipsoid_foot(const Vector& axes, const VecRef& y);

// Euclidean projection onto the l1 ball of radius alpha.
Vector project_l1_ball(const VecRef& x, double alpha);

}  // namespace gauss_regret
