#include "gauss_regret/regret.hpp"

#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/intrinsic.hpp"
#include "gauss_regret/kernels.hpp"

namespace gauss_regret {

std::string to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
    case Method::bound_upper: return "bound_upper";
    case Method::bound_lower: return "bound_lower";
  }
  return "unknown";
}

namespace {

bool exact_route(const SetSpec& s) {
  if (s.as<shape::Product>()) {
    for (const auto& p : s.as<shape::Product>()->parts)
      if (!exact_route(p)) return false;
    return true;
  }
  return exact_volumes(s).has_value();
}

double exact_value(const SetSpec& s) {
  if (const auto* p = s.as<shape::Product>()) {
    double v = 0.0;
    for (const auto& part : p->parts) v += exact_value(part);
    return v;
  }
  if (const auto* b = s.as<shape::Box>()) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < b->sides.size(); ++i) v += std::log1p(b->sides[i] / kSqrtTwoPi);
    return v;
  }
  if (const auto* sg = s.as<shape::Segment>()) return std::log1p((sg->b - sg->a).norm() / kSqrtTwoPi);
  auto seq = exact_volumes(s);
  if (!seq) throw Unsupported("no exact regret for a " + type_name(s));
  return regret_from_volumes(*seq, 1.0).value;
}

}  // namespace

bool has_exact(const SetSpec& s) { return exact_route(s); }

RegretEstimate regret_exact(const SetSpec& s) {
  if (exact_route(s)) {
    RegretEstimate e;
    e.value = exact_value(s);
    e.method = Method::exact;
    return e;
  }
  if (const auto* u = s.as<shape::Union>()) {
    std::vector<RegretEstimate> parts;
    for (const auto& p : u->parts) {
      if (!exact_route(p)) throw Unsupported("union part without an exact regret: " + type_name(p));
      parts.push_back(regret_exact(p));
    }
    return mixture_upper_bound(parts);
  }
  throw Unsupported("no exact regret for a " + type_name(s));
}

RegretEstimate regret_quadrature(const SetSpec& s, const QuadratureOptions& opt) {
  const int n = s.dim();
  if (n > 4) throw Unsupported("quadrature: dimension too large (" + std::to_string(n) + " > 4)");
  if (!(opt.tol > 0.0 && opt.tol < 1.0)) throw Error("quadrature: tol must lie in (0, 1)");
  const BoundingBox bb = bounding_box(s);
  const double margin = std::sqrt(2.0 * std::log(1.0 / opt.tol)) + std::sqrt(static_cast<double>(n)) + 2.0;
  const Vector lo = bb.lo.array() - margin;
  const Vector len = (bb.hi - bb.lo).array() + 2.0 * margin;

  // Mass of exp(-dist^2/2) outside the inflated box, bounded by the same
  // integral for the bounding box; relative to a total of at least 1.
  double tail = 0.0;
  for (int i = 0; i < n; ++i) {
    double term = 2.0 * normal_sf(margin);
    for (int j = 0; j < n; ++j)
      if (j != i) term *= 1.0 + (bb.hi[j] - bb.lo[j]) / kSqrtTwoPi;
    tail += term;
  }

  auto integrand = [&](const Vector& x) {
    double d = dist(s, x);
    return std::exp(-0.5 * d * d);
  };
  double h = std::min(0.5, len.minCoeff() / 8.0);
  // Kinks of dist^2 sit at arbitrary positions between nodes, so a single
  // small change between levels can be a coincidence: require two in a row.
  double prev = NAN, prev_change = INFINITY;
  while (true) {
    kernels::Grid g;
    g.lo = lo;
    g.h = h;
    double total = 1.0;
    for (int i = 0; i < n; ++i) {
      g.nodes.push_back(static_cast<long>(std::ceil(len[i] / h)) + 1);
      total *= static_cast<double>(g.nodes.back());
    }
    if (total > opt.max_nodes)
      throw ConvergenceError("quadrature: no convergence within the node budget (last change " +
                             std::to_string(prev_change) + ")");
    double sum = opt.parallel ? kernels::trapezoid_sum(g, integrand) : kernels::trapezoid_sum_serial(g, integrand);
    double value = std::log(sum) + n * std::log(h) - 0.5 * n * std::log(kTwoPi);
    const double change = std::isfinite(prev) ? std::abs(value - prev) : INFINITY;
    if (change < opt.tol && prev_change < opt.tol) {
      RegretEstimate e;
      e.value = value;
      e.method = Method::quadrature;
      e.half_width = opt.tol + tail;
      e.samples = static_cast<std::size_t>(total);
      return e;
    }
    prev = value;
    prev_change = change;
    h *= 0.5;
  }
}

namespace {

RegretEstimate mc_from(const std::vector<double>& logs, const MCConfig& cfg) {
  kernels::Summary sm = kernels::combine_log_means(logs, cfg.plan(Stream::gaussian_vectors));
  RegretEstimate e;
  e.value = sm.value;
  e.method = Method::monte_carlo;
  e.half_width = 2.0 * sm.se;
  e.samples = cfg.samples;
  e.seed = cfg.seed;
  e.degenerate = sm.degenerate;
  return e;
}

}  // namespace

RegretEstimate regret_mc(const SetSpec& s, const MCConfig& cfg) {
  cfg.validate();
  auto logs = kernels::batch_log_mean_exp(cfg.plan(Stream::gaussian_vectors), s.dim(),
                                          [&](const Vector& x) { return sup_quadratic(s, x); });
  return mc_from(logs, cfg);
}

RegretEstimate regret_mc_serial(const SetSpec& s, const MCConfig& cfg) {
  cfg.validate();
  auto logs = kernels::batch_log_mean_exp_serial(cfg.plan(Stream::gaussian_vectors), s.dim(),
                                                 [&](const Vector& x) { return sup_quadratic(s, x); });
  return mc_from(logs, cfg);
}

RegretEstimate regret(const SetSpec& s, const RegretOptions& opt) {
  switch (opt.method) {
    case MethodChoice::exact: return regret_exact(s);
    case MethodChoice::quadrature: return regret_quadrature(s, opt.quad);
    case MethodChoice::monte_carlo: return regret_mc(s, opt.mc);
    case MethodChoice::automatic: break;
  }
  if (has_exact(s)) return regret_exact(s);
  if (s.dim() <= 4) {
    // bounded attempt; Monte Carlo takes over when the grid gets too fine
    QuadratureOptions q = opt.quad;
    q.max_nodes = std::min(q.max_nodes, 2e7);
    try {
      return regret_quadrature(s, q);
    } catch (const ConvergenceError&) {
    }
  }
  return regret_mc(s, opt.mc);
}

RegretEstimate mixture_upper_bound(const std::vector<RegretEstimate>& parts) {
  if (parts.empty()) throw Error("mixture_upper_bound: no parts");
  RegretEstimate e;
  e.method = Method::bound_upper;
  e.value = -INFINITY;
  for (const auto& p : parts) {
    e.value = std::max(e.value, p.value);
    e.half_width = std::max(e.half_width, p.half_width);
  }
  e.value += std::log(static_cast<double>(parts.size()));
  return e;
}

WidthBounds width_bounds(double width, double diameter, bool convex) {
  WidthBounds b;
  b.width = width;
  b.diameter = diameter;
  b.upper = width;
  b.lower = std::max(0.0, width - 0.5 * diameter * diameter);
  if (convex) b.lower = std::max(b.lower, std::log1p(width));
  return b;
}

RegretEstimate regret_at_noise(const SetSpec& s, double sigma, const RegretOptions& opt) {
  if (!(sigma > 0.0)) throw Error("regret_at_noise: sigma must be positive");
  return regret(SetSpec::scale(1.0 / sigma, s), opt);
}

RegretEstimate regret_repeated(const SetSpec& s, double n, const RegretOptions& opt) {
  if (!(n > 0.0)) throw Error("regret_repeated: n must be positive");
  return regret(SetSpec::scale(std::sqrt(n), s), opt);
}

LargeScaleReport large_scale_report(const SetSpec& s, double t, const RegretOptions& opt) {
  const int n = s.dim();
  const double vol = volume(s);
  if (!(vol > 0.0)) throw Error("large_scale_report: the set must have positive volume");
  LargeScaleReport r;
  r.t = t;
  RegretEstimate e = regret(SetSpec::scale(t, s), opt);
  r.regret = e.value;
  r.half_width = e.half_width;
  r.regret_minus_nlogt = e.value - n * std::log(t);
  r.log_volume = std::log(vol) - 0.5 * n * std::log(kTwoPi);
  r.gap = r.regret_minus_nlogt - r.log_volume;
  RegretEstimate w = regret(SetSpec::scale(t * kSqrtTwoPi, s), opt);
  r.wills_gap = w.value - n * std::log(t) - std::log(vol);
  return r;
}

}  // namespace gauss_regret
