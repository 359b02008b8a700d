#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gauss_regret/mc.hpp"
#include "gauss_regret/set_spec.hpp"

namespace gauss_regret {

enum class Method { exact, quadrature, monte_carlo, bound_upper, bound_lower };
std::string to_string(Method m);

// Minimax regret estimate in nats. half_width is zero for exact values, the
// tolerance plus tail bound for quadrature and 2 SE for Monte Carlo.
struct RegretEstimate {
  double value = 0.0;
  Method method = Method::exact;
  double half_width = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;  // every MC batch gave the same mean
};

struct QuadratureOptions {
  double tol = 1e-6;
  double max_nodes = 2e8;  // per refinement level
  bool parallel = true;
};

enum class MethodChoice { automatic, exact, quadrature, monte_carlo };

struct RegretOptions {
  MethodChoice method = MethodChoice::automatic;
  MCConfig mc;
  QuadratureOptions quad;
};

bool has_exact(const SetSpec& s);
// Points, segments, balls, boxes, equal-axis ellipsoids and products /
// scalings / translates of those. A union of such parts gets the mixture
// upper bound instead. Anything else throws Unsupported.
RegretEstimate regret_exact(const SetSpec& s);

// Trapezoid rule for log((2 pi)^{-n/2} int exp(-dist^2 / 2)) on the bounding
// box inflated by sqrt(2 log(1/tol)) + sqrt(n) + 2, halving the step until two
// levels agree to tol. Dimensions 1 to 4.
RegretEstimate regret_quadrature(const SetSpec& s, const QuadratureOptions& opt = {});

// log E exp(sup_quadratic(X)) by batch means.
RegretEstimate regret_mc(const SetSpec& s, const MCConfig& cfg);
// Same estimator on the serial reference kernel.
RegretEstimate regret_mc_serial(const SetSpec& s, const MCConfig& cfg);

// exact -> quadrature (dim <= 4, at most 2e7 nodes per level) -> Monte Carlo.
RegretEstimate regret(const SetSpec& s, const RegretOptions& opt = {});

// R*(union of N sets) <= max_i R*(A_i) + log N.
RegretEstimate mixture_upper_bound(const std::vector<RegretEstimate>& parts);

struct WidthBounds {
  double width = 0.0;
  double diameter = 0.0;
  double upper = 0.0;  // R* <= w
  double lower = 0.0;  // max(w - diam^2 / 2, log(1 + w) for convex sets)
};
WidthBounds width_bounds(double width, double diameter, bool convex);

// R*(A, sigma^2) = R*(A / sigma) and R*_n(A) = R*(sqrt(n) A).
RegretEstimate regret_at_noise(const SetSpec& s, double sigma, const RegretOptions& opt = {});
RegretEstimate regret_repeated(const SetSpec& s, double n, const RegretOptions& opt = {});

struct LargeScaleReport {
  double t = 0.0;
  double regret = 0.0;             // R*(tA)
  double half_width = 0.0;
  double regret_minus_nlogt = 0.0;  // R*(tA) - n log t
  double log_volume = 0.0;          // log vol_n(A / sqrt(2 pi))
  double gap = 0.0;                 // regret_minus_nlogt - log_volume
  double wills_gap = 0.0;           // log W(tA) - n log t - log vol_n(A)
};
LargeScaleReport large_scale_report(const SetSpec& s, double t, const RegretOptions& opt = {});

}  // namespace gauss_regret
