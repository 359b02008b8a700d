#pragma once

#include <vector>

#include "gauss_regret/common.hpp"

namespace gauss_regret {

struct HullProjection {
  Vector point;      // nearest point of conv(points) to x
  double gap = 0.0;  // Frank-Wolfe dual gap at exit
  int iterations = 0;
};

// Nearest point of a convex hull: fully corrective Frank-Wolfe (Wolfe's
// min-norm-point method). Throws ConvergenceError after 10 * |points| * dim
// iterations.
HullProjection project_onto_hull(const std::vector<Vector>& points, const VecRef& x);

// Volume (length / area / volume) of the convex hull of points in R^1..R^3.
double hull_volume(const std::vector<Vector>& points);

double hull_area_2d(std::vector<Eigen::Vector2d> pts);
double hull_volume_3d(const std::vector<Eigen::Vector3d>& pts);

}  // namespace gauss_regret
