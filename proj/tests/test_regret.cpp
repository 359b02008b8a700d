#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gauss_regret/complexity.hpp"
#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/intrinsic.hpp"
#include "gauss_regret/regret.hpp"

using namespace gauss_regret;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// log((2 pi)^{-1/2} int exp(-dist(y, A)^2 / 2) dy) for A in R^1 by composite
// Simpson on a wide window
double regret_1d_oracle(const SetSpec& s) {
  const BoundingBox bb = bounding_box(s);
  const double lo = bb.lo[0] - 12.0, hi = bb.hi[0] + 12.0;
  const long m = 200000;
  const double h = (hi - lo) / m;
  double acc = 0.0;
  for (long i = 0; i <= m; ++i) {
    const double y = lo + h * i;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double d = dist(s, vec({y}));
    acc += w * std::exp(-0.5 * d * d);
  }
  return std::log(acc * h / 3.0 / kSqrtTwoPi);
}

}  // namespace

TEST_CASE("closed forms") {
  for (double th : {0.5, 1.0, 10.0}) {
    const SetSpec seg = SetSpec::segment(vec({0.0}), vec({kSqrtTwoPi * th}));
    CHECK(regret_exact(seg).value == Approx(std::log1p(th)).epsilon(1e-14));
    CHECK(regret_exact(seg).method == Method::exact);
    CHECK(regret_exact(seg).half_width == 0.0);
  }
  CHECK(regret_exact(SetSpec::point(vec({1, 2}))).value == 0.0);
  // box sqrt(2 pi) [0, 1]^2: (1 + 1)^2
  const SetSpec box = SetSpec::box(Vector::Zero(2), Vector::Constant(2, kSqrtTwoPi));
  CHECK(regret_exact(box).value == Approx(2.0 * std::log(2.0)));
  // ball in R^1 is an interval
  CHECK(regret_exact(SetSpec::ball(vec({3.0}), 1.0)).value == Approx(std::log1p(2.0 / kSqrtTwoPi)));
  // ball in R^3 from its intrinsic volumes
  const IntrinsicVolumeSeq b = ball_volumes(3, 1.5);
  double w = 0.0;
  for (int j = 0; j <= 3; ++j) w += b.values[j] * std::pow(kSqrtTwoPi, -j);
  CHECK(regret_exact(SetSpec::ball(Vector::Zero(3), 1.5)).value == Approx(std::log(w)).epsilon(1e-13));
  CHECK_THROWS_AS(regret_exact(SetSpec::ellipsoid(vec({2, 1}))), Unsupported);
  CHECK_THROWS_AS(regret_exact(SetSpec::finite_points({vec({0}), vec({1})})), Unsupported);
}

TEST_CASE("quadrature against independent one-dimensional integrals") {
  const std::vector<SetSpec> sets = {
      SetSpec::finite_points({vec({0}), vec({1.3})}),
      SetSpec::finite_points({vec({-2}), vec({0}), vec({0.4}), vec({5})}),
      SetSpec::set_union({SetSpec::ball(vec({0}), 0.5), SetSpec::point(vec({3}))}),
      SetSpec::segment(vec({-1}), vec({4})),
  };
  for (const auto& s : sets) {
    const RegretEstimate q = regret_quadrature(s, {1e-8});
    CHECK(q.method == Method::quadrature);
    CHECK(q.value == Approx(regret_1d_oracle(s)).epsilon(1e-7));
    CHECK(q.half_width > 0.0);
  }
  // two points at distance rho: log(2 Phi(rho / 2))
  for (double rho : {0.1, 1.0, 4.0}) {
    const RegretEstimate q = regret_quadrature(SetSpec::finite_points({vec({0}), vec({rho})}), {1e-9});
    CHECK(q.value == Approx(std::log(2.0 * normal_cdf(0.5 * rho))).epsilon(1e-8));
  }
}

TEST_CASE("segment quadrature matches log(1 + theta)") {
  for (double th : {0.5, 1.0, 10.0}) {
    const RegretEstimate q = regret_quadrature(SetSpec::segment(vec({0.0}), vec({kSqrtTwoPi * th})), {1e-7});
    CHECK(std::abs(q.value - std::log1p(th)) <= 1e-5);
  }
}

TEST_CASE("Monte Carlo and quadrature against exact values") {
  const std::vector<SetSpec> sets = {
      SetSpec::ball(Vector::Zero(3), 1.5),
      SetSpec::box(Vector::Zero(2), Vector::Constant(2, kSqrtTwoPi)),
      SetSpec::segment(vec({0, 0}), vec({1, 2})),
      SetSpec::product({SetSpec::segment(vec({0}), vec({2})), SetSpec::ball(vec({0, 0}), 0.8)}),
  };
  for (const auto& s : sets) {
    const double ex = regret_exact(s).value;
    const RegretEstimate mc = regret_mc(s, MCConfig{400000, 32, 9});
    CHECK(mc.method == Method::monte_carlo);
    CHECK(std::abs(mc.value - ex) <= 3.0 * mc.half_width);
    const RegretEstimate q = regret_quadrature(s, {1e-5});
    CHECK(std::abs(q.value - ex) <= 1e-4);
  }
}

TEST_CASE("method dispatch") {
  CHECK(regret(SetSpec::ball(Vector::Zero(2), 1.0)).method == Method::exact);
  RegretOptions opt;
  opt.quad.tol = 1e-5;
  CHECK(regret(SetSpec::ellipsoid(vec({2, 1})), opt).method == Method::quadrature);
  opt.mc = {20000, 32, 1};
  CHECK(regret(SetSpec::ellipsoid(vec({1, 1, 1, 1, 0.5})), opt).method == Method::monte_carlo);
  opt.method = MethodChoice::quadrature;
  CHECK_THROWS_AS(regret(SetSpec::ball(Vector::Zero(5), 1.0), opt), Unsupported);
  CHECK_THROWS_AS(regret_quadrature(SetSpec::ball(Vector::Zero(1), 1.0), {0.0}), Error);
}

TEST_CASE("degenerate Monte Carlo") {
  const RegretEstimate p = regret_mc(SetSpec::point(vec({0, 0})), MCConfig{1000, 16, 1});
  CHECK(p.value == 0.0);
  CHECK(p.degenerate);
  CHECK(p.half_width == 0.0);
}

TEST_CASE("product additivity") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int k = 0; k < 20; ++k) {
    const SetSpec a = SetSpec::ball(Vector::Zero(1 + k % 3), u(rng));
    const SetSpec b = SetSpec::box(Vector::Zero(2), vec({u(rng), u(rng)}));
    const SetSpec ab = SetSpec::product({a, b});
    CHECK(regret_exact(ab).value == Approx(regret_exact(a).value + regret_exact(b).value).epsilon(1e-12));
  }
}

TEST_CASE("mixture upper bound for unions") {
  const SetSpec u = SetSpec::set_union({SetSpec::ball(vec({0}), 1.0), SetSpec::segment(vec({5}), vec({9}))});
  const RegretEstimate b = regret_exact(u);
  CHECK(b.method == Method::bound_upper);
  CHECK(b.value == Approx(std::log1p(4.0 / kSqrtTwoPi) + std::log(2.0)));
  CHECK(regret_quadrature(u, {1e-7}).value <= b.value);
}

TEST_CASE("width sandwich") {
  const MCConfig cfg{200000, 32, 4};
  const std::vector<SetSpec> sets = {
      SetSpec::ball(Vector::Zero(3), 1.5),
      SetSpec::finite_points({vec({0, 0}), vec({1, 0}), vec({0, 2})}),
      SetSpec::segment(vec({0}), vec({1})),
      SetSpec::box(Vector::Zero(2), vec({1, 0.5})),
  };
  for (const auto& s : sets) {
    const WidthEstimate w = gaussian_width_mc(s, cfg);
    const WidthBounds b = width_bounds(w.value, diameter(s).value, s.is_convex());
    const RegretEstimate r = regret(s, RegretOptions{MethodChoice::automatic, cfg, {1e-6}});
    const double slack = 4.0 * w.se + r.half_width;
    CHECK(r.value <= b.upper + slack);
    CHECK(r.value >= b.lower - slack - 4.0 * w.se);
  }
  const WidthBounds wb = width_bounds(2.0, 1.0, true);
  CHECK(wb.lower == Approx(std::max(1.5, std::log(3.0))));
  CHECK(width_bounds(2.0, 3.0, false).lower == 0.0);
}

TEST_CASE("noise level and repetition rescale the set") {
  const SetSpec s = SetSpec::box(Vector::Zero(2), vec({2.0, 1.0}));
  const double base = regret_exact(SetSpec::scale(0.5, s)).value;
  CHECK(regret_at_noise(s, 2.0).value == Approx(base));
  CHECK(regret_repeated(s, 0.25).value == Approx(base));
  CHECK_THROWS_AS(regret_at_noise(s, 0.0), Error);
  CHECK_THROWS_AS(regret_repeated(s, -1.0), Error);
}

TEST_CASE("dilation curve") {
  // increasing in t, and R*(tA)/t non-increasing for convex A
  const SetSpec s = SetSpec::ball(Vector::Zero(2), 1.0);
  double prev = 0.0, prev_slope = INFINITY;
  for (double t = 0.01; t < 100.0; t *= 1.5) {
    const double r = regret_exact(SetSpec::scale(t, s)).value;
    CHECK(r >= prev);
    CHECK(r / t <= prev_slope + 1e-12);
    prev = r;
    prev_slope = r / t;
  }
}

TEST_CASE("small and large scale") {
  // segment of length 1: w = 1 / sqrt(2 pi)
  const SetSpec seg = SetSpec::segment(vec({0.0}), vec({1.0}));
  const double t = 1e-3;
  CHECK(std::abs(regret_exact(SetSpec::scale(t, seg)).value / (t / kSqrtTwoPi) - 1.0) <= 0.02);
  const SetSpec sq = SetSpec::box(Vector::Zero(2), Vector::Ones(2));
  const LargeScaleReport r = large_scale_report(sq, 50.0);
  CHECK(r.wills_gap == Approx(2.0 * std::log1p(1.0 / 50.0)).epsilon(1e-12));
  CHECK(r.gap == Approx(2.0 * std::log1p(kSqrtTwoPi / 50.0)).epsilon(1e-12));
  CHECK(r.log_volume == Approx(-std::log(kTwoPi)));
  // both gaps vanish as t grows
  const LargeScaleReport far = large_scale_report(sq, 1e6);
  CHECK(std::abs(far.gap) < 1e-5);
  CHECK(std::abs(far.wills_gap) < 1e-5);
}

TEST_CASE("Monte Carlo for an off-origin point is unbiased on the linear scale") {
  const RegretEstimate p = regret_mc(SetSpec::point(vec({1, 1})), MCConfig{400000, 32, 1});
  CHECK_FALSE(p.degenerate);
  CHECK(std::abs(p.value) <= 3.0 * p.half_width);
}
