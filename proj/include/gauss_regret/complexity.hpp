#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gauss_regret/mc.hpp"
#include "gauss_regret/set_spec.hpp"

namespace gauss_regret {

struct WidthEstimate {
  double value = 0.0;
  double se = 0.0;
};

// w(A) = E sup_{θ∈A} <θ, X>.
WidthEstimate gaussian_width_mc(const SetSpec& s, const MCConfig& cfg);
WidthEstimate gaussian_width_mc_serial(const SetSpec& s, const MCConfig& cfg);

// Exact E|X| for X ~ N(0, I_n), i.e. the width of the unit ball.
double unit_ball_width(int n);

// Local width w_A(r) = sup_{θ∈A} w(A ∩ B(θ, r)), as an interval [lower, upper].
struct LocalWidth {
  double r = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double se = 0.0;
  int centers = 0;
  bool lower_bound_only = false;  // centre budget cut the sup short
};

// Routes: finite sets (exact filter over centres, Monte Carlo widths with
// common random numbers), balls and segments (closed form), ellipsoids (the
// comparison ellipsoid with axes min(a_i, r) and its sqrt(2) dilate) and l1
// balls (support of the intersection by inf-convolution).
class LocalWidthModel {
 public:
  LocalWidthModel(const SetSpec& s, const MCConfig& cfg, int center_budget = 64);
  LocalWidth at(double r) const;
  const std::string& route() const { return route_; }
  // w(r)/r is non-increasing (convex routes): fixed points by bisection.
  bool ratio_monotone() const { return route_ != "finite"; }
  // Radii at which the finite-route estimate can change.
  std::vector<double> breakpoints() const;

 private:
  std::string route_;
  double factor_ = 1.0;
  Vector axes_;
  double alpha_ = 0.0;
  double length_ = 0.0;
  int dim_ = 0;
  MCConfig cfg_;
  Matrix x_;  // common Gaussian draws, one row per sample
  struct CenterCurve {
    std::vector<double> dist;  // sorted distances from the centre
    std::vector<double> mean;  // width estimate with the first k+1 points
    std::vector<double> se;
  };
  std::vector<CenterCurve> curves_;
  bool lower_only_ = false;

  LocalWidth batch_estimate(double r, const std::function<double(const Vector&)>& f) const;
};

// Greedy cover and packing of a point list in lexicographic order. cover is
// the size of a maximal set with pairwise distances > r (hence an r-cover);
// packing_2r the same at 2r, a lower bound for N(r).
struct CoverPack {
  std::size_t cover = 0;
  std::size_t packing = 0;
};
CoverPack covering_packing(std::vector<Vector> points, double r);

// Farthest-point traversal: insertion distance of each point to the ones
// before it (the first is +inf). Non-increasing. Ties go to the lower index
// after lexicographic sorting.
std::vector<double> farthest_point_distances(std::vector<Vector> points);

// sum_{a_i >= 2r} log(a_i / r): an upper bound for log N(E_a, 5r) and a lower
// bound for log N(E_a, r).
double covering_ellipsoid_sum(const Vector& axes, double r);

struct CoveringBounds {
  double r = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
  double eps = 0.0;  // sampling resolution behind the bounds (0: exact route)
};

class CoveringModel {
 public:
  explicit CoveringModel(const SetSpec& s, std::size_t sample_budget = 100000);
  CoveringBounds at(double r) const;
  const std::string& route() const { return route_; }
  // Both bounds are exact non-increasing functions of r (bisection allowed).
  bool monotone_exact() const { return route_ == "ellipsoid" || route_ == "segment"; }
  std::vector<double> breakpoints() const;

 private:
  std::string route_;
  SetSpec spec_;
  double factor_ = 1.0;
  Vector axes_;
  double length_ = 0.0;
  std::vector<double> fp_;  // farthest-point insertion distances
  std::size_t budget_;
};

struct FixedPoint {
  double lo = 0.0;
  double hi = 0.0;
};

// Infima over r, each as an interval [lo, hi] holding the true value.
struct InfForms {
  double width_lo = 0.0, width_hi = 0.0;    // inf_r { w_A(r) + log N(A, r) }
  double square_lo = 0.0, square_hi = 0.0;  // inf_r { log N(A, r) + r^2 }
  double half_square_hi = 0.0;              // inf_r { log N(A, r) + r^2 / 2 } (upper end)
  // r~^2 <= inf{log N + r^2} <= 2 r~^2, checked on the interval ends.
  bool fixed_point_relation = false;
};

struct ProfileRow {
  double r = 0.0;
  double w = 0.0;
  double w_lo = 0.0;
  double w_hi = 0.0;
  double se = 0.0;
  double log_n_lo = 0.0;
  double log_n_hi = 0.0;
};

struct EntropyNumber {
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct ProfileOptions {
  MCConfig mc{20000, 32, 0};
  int radii = 64;
  int center_budget = 64;
  std::size_t sample_budget = 100000;
  // Fixed points are computed from w -/+ se_multiplier * se.
  double se_multiplier = 0.0;
};

struct ComplexityProfile {
  double diameter = 0.0;
  bool diameter_exact = true;
  std::string width_route;
  std::string covering_route;
  bool width_lower_bound_only = false;
  std::vector<ProfileRow> rows;  // 64 log-spaced radii on [diam / 1e4, diam]
  FixedPoint r_star;
  FixedPoint r_tilde;
  InfForms inf;
  std::vector<EntropyNumber> entropy;
};

ComplexityProfile complexity_profile(const SetSpec& s, const ProfileOptions& opt = {});

}  // namespace gauss_regret
