#include "gauss_regret/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gauss_regret/coding.hpp"
#include "gauss_regret/complexity.hpp"
#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/intrinsic.hpp"
#include "gauss_regret/regret.hpp"

namespace gauss_regret {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double ellipsoid_regret_functional(const Vector& axes) {
  const Eigen::ArrayXd a2 = axes.array().square();
  auto g = [&](double s) { return s - (a2 / (s + a2)).sum(); };
  double lo = 0.0, hi = static_cast<double>(axes.size());
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  if (!(s > 0.0)) return 0.0;
  return (a2 / s).log1p().sum() + s;
}

double ellipsoid_redundancy_functional(const Vector& axes) {
  std::vector<double> a(axes.data(), axes.data() + axes.size());
  std::sort(a.begin(), a.end(), std::greater<>());
  double best = 0.25 * a.front() * a.front();  // no axis counted: r > a_1 / 2
  double logsum = 0.0;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    // the top k axes satisfy a_i >= 2r exactly for r in (a_{k+1}/2, a_k/2]
    logsum += std::log(a[k - 1]);
    const double hi = 0.5 * a[k - 1];
    const double lo = k < a.size() ? 0.5 * a[k] : 0.0;
    if (hi <= lo) continue;
    double r = std::clamp(std::sqrt(0.5 * static_cast<double>(k)), lo, hi);
    if (r <= 0.0) continue;
    best = std::min(best, logsum - static_cast<double>(k) * std::log(r) + r * r);
  }
  return best;
}

namespace {

// Accumulates instances of one property.
class Check {
 public:
  Check(std::string name, std::string policy) {
    pc_.name = std::move(name);
    pc_.error_budget_policy = std::move(policy);
  }
  void leq(std::string label, double lhs, double rhs, double budget) { add(std::move(label), lhs, rhs, budget, false); }
  void eq(std::string label, double lhs, double rhs, double budget) { add(std::move(label), lhs, rhs, budget, true); }
  PropertyCheck finish() {
    int inequalities = 0;
    pc_.worst_margin = INFINITY;
    for (const auto& r : pc_.instances) {
      pc_.worst_margin = std::min(pc_.worst_margin, r.margin);
      if (r.violation) ++pc_.violations;
      if (!r.equality) ++inequalities;
      if (r.budget_dominated) ++pc_.budget_dominated;
    }
    pc_.instance_count = static_cast<int>(pc_.instances.size());
    if (pc_.instances.empty()) pc_.worst_margin = 0.0;
    if (pc_.violations > 0) pc_.verdict = Verdict::fail;
    else if (pc_.budget_dominated > 0.2 * inequalities) pc_.verdict = Verdict::inconclusive;
    else pc_.verdict = Verdict::pass;
    return pc_;
  }

 private:
  void add(std::string label, double lhs, double rhs, double budget, bool equality) {
    InstanceRecord r;
    r.label = std::move(label);
    r.lhs = lhs;
    r.rhs = rhs;
    r.budget = budget;
    r.equality = equality;
    if (equality) {
      r.margin = -std::abs(lhs - rhs);
      r.violation = !(std::abs(lhs - rhs) <= budget);
    } else {
      r.margin = rhs - lhs;
      r.violation = !(lhs - rhs <= budget);
      r.budget_dominated = !r.violation && r.margin < budget;
    }
    pc_.instances.push_back(std::move(r));
  }
  PropertyCheck pc_;
};

// Regret value with its error: q is a deterministic tolerance (quadrature or
// rounding), se a Monte Carlo standard error.
struct Est {
  double v = 0.0;
  double q = 0.0;
  double se = 0.0;
};

double budget(std::initializer_list<Est> es, double scale = 1.0) {
  double q = 0.0, var = 0.0;
  for (const auto& e : es) {
    q += e.q;
    var += e.se * e.se;
  }
  return scale * (q + 4.0 * std::sqrt(var));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt_vec(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + ")";
}

struct Ctx {
  VerifyOptions opt;
  std::uint64_t suite_seed = 0;

  MCConfig mc(std::uint64_t instance) const {
    return {opt.mc_samples, 32, derive_seed(suite_seed, Stream::gaussian_vectors, instance)};
  }
  Rng rng(std::uint64_t instance) const { return Rng(derive_seed(suite_seed, Stream::instances, instance)); }

  // exact -> quadrature (n <= 3) -> Monte Carlo; the MC seed is shared
  // within an instance so that compared values use common random numbers.
  Est regret_of(const SetSpec& s, std::uint64_t instance) const {
    if (has_exact(s)) {
      RegretEstimate e = regret_exact(s);
      if (e.method == Method::exact) return {e.value, 1e-9 * (1.0 + std::abs(e.value)), 0.0};
    }
    if (s.dim() <= 3) {
      try {
        QuadratureOptions q;
        // three-dimensional grids get expensive below 1e-4
        q.tol = s.dim() == 3 ? std::max(opt.quad_tol, 1e-4) : opt.quad_tol;
        q.max_nodes = 2e7;
        RegretEstimate e = regret_quadrature(s, q);
        return {e.value, e.half_width, 0.0};
      } catch (const ConvergenceError&) {
      }
    }
    RegretEstimate e = regret_mc(s, mc(instance));
    return {e.value, 0.0, 0.5 * e.half_width};
  }
  Est width_of(const SetSpec& s, std::uint64_t instance) const {
    // closed forms where they exist
    if (const auto* b = s.as<shape::Box>()) return {b->sides.sum() / kSqrtTwoPi, 1e-12, 0.0};
    if (const auto* b = s.as<shape::Ball>()) return {b->radius * unit_ball_width(s.dim()), 1e-12, 0.0};
    if (const auto* e = s.as<shape::Ellipsoid>())
      if (e->axes.maxCoeff() == e->axes.minCoeff()) return {e->axes[0] * unit_ball_width(s.dim()), 1e-12, 0.0};
    WidthEstimate w = gaussian_width_mc(s, mc(instance));
    return {w.value, 0.0, w.se};
  }
};

// Point clouds from Gaussian, sphere and lattice generators.
struct Cloud {
  std::vector<Vector> points;
  std::string label;
};

Cloud random_cloud(Rng& rng, int n, int m) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  Cloud c;
  const int k = kind(rng);
  if (k == 0) {
    const double sigma = 0.3 + 1.7 * u(rng);
    for (int i = 0; i < m; ++i) {
      Vector v(n);
      for (int j = 0; j < n; ++j) v[j] = sigma * nd(rng);
      c.points.push_back(v);
    }
    c.label = "gaussian n=" + std::to_string(n) + " m=" + std::to_string(m) + " sigma=" + fmt(sigma);
  } else if (k == 1) {
    const double radius = 0.5 + 1.5 * u(rng);
    for (int i = 0; i < m; ++i) {
      Vector v(n);
      for (int j = 0; j < n; ++j) v[j] = nd(rng);
      c.points.push_back(radius * v / std::max(v.norm(), 1e-12));
    }
    c.label = "sphere n=" + std::to_string(n) + " m=" + std::to_string(m) + " radius=" + fmt(radius);
  } else {
    const double spacing = 0.5 + u(rng);
    std::uniform_int_distribution<int> cell(-2, 2);
    for (int i = 0; i < m; ++i) {
      Vector v(n);
      for (int j = 0; j < n; ++j) v[j] = spacing * cell(rng);
      c.points.push_back(v);
    }
    c.label = "lattice n=" + std::to_string(n) + " m=" + std::to_string(m) + " spacing=" + fmt(spacing);
  }
  return c;
}

Matrix random_orthogonal(Rng& rng, int n) {
  std::normal_distribution<double> nd;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = nd(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

std::vector<Vector> sum_points(const std::vector<Vector>& a, double la, const std::vector<Vector>& b, double lb) {
  std::vector<Vector> out;
  for (const auto& p : a)
    for (const auto& q : b) out.push_back(la * p + lb * q);
  return out;
}

struct Ellipsoid {
  Vector axes;
  std::string label;
};

Ellipsoid random_ellipsoid(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 2);
  const double c = std::exp(std::log(0.3) + u(rng) * (std::log(3.0) - std::log(0.3)));
  Vector a(n);
  std::string label;
  switch (kind(rng)) {
    case 0:
      a.setConstant(c);
      label = "flat";
      break;
    case 1: {
      const double q = 0.3 + 0.5 * u(rng);
      for (int i = 0; i < n; ++i) a[i] = c * std::pow(q, i);
      label = "geometric q=" + fmt(q);
      break;
    }
    default: {
      const double p = 0.5 + 1.5 * u(rng);
      for (int i = 0; i < n; ++i) a[i] = c * std::pow(i + 1.0, -p);
      label = "polynomial p=" + fmt(p);
    }
  }
  return {a, "ellipsoid n=" + std::to_string(n) + " " + label + " c=" + fmt(c)};
}

const char* kPolicy = "4 x combined MC standard error + quadrature tolerances (1e-9 relative for closed forms)";

// ---------------------------------------------------------------- suites

std::vector<PropertyCheck> suite_comparison(const Ctx& c) {
  Check chk("comparison", kPolicy);
  for (int t = 0; t < c.opt.trials; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 3), size(2, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = t == 2 ? 3 : dim(rng);
    const int m = t == 2 ? 20 : size(rng);
    Cloud a = random_cloud(rng, n, m);
    // contraction: rotation, shrink, translation, optional projection
    std::string how;
    Matrix map = Matrix::Identity(n, n);
    Vector shift = Vector::Zero(n);
    if (t == 0) {
      how = "identity";
    } else {
      const double shrink = t == 1 ? 0.5 : 0.3 + 0.7 * u(rng);
      map = shrink * random_orthogonal(rng, n);
      for (int i = 0; i < n; ++i) shift[i] = u(rng) - 0.5;
      how = "shrink=" + fmt(shrink);
      if (n >= 2 && (t == 2 || u(rng) < 0.4)) {
        map = Matrix(map.topRows(n - 1));
        shift = Vector(shift.head(n - 1));
        how += " project";
      }
    }
    std::vector<Vector> image;
    for (const auto& p : a.points) image.push_back(map * p + shift);
    for (std::size_t i = 0; i < image.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if ((image[i] - image[j]).norm() > (a.points[i] - a.points[j]).norm() * (1 + 1e-12) + 1e-12)
          throw Error("comparison: generated map is not a contraction");
    Est ra = c.regret_of(SetSpec::finite_points(a.points), t);
    Est rb = c.regret_of(SetSpec::finite_points(image), t);
    std::string label = a.label + " phi: " + how;
    if (t == 0) chk.eq(label, rb.v, ra.v, budget({ra, rb}));
    else chk.leq(label, rb.v, ra.v, budget({ra, rb}));
  }
  return {chk.finish()};
}

std::vector<PropertyCheck> suite_additive(const Ctx& c) {
  Check conc("concavity", kPolicy), sub("subadditivity", kPolicy), diff("difference", kPolicy);
  for (int t = 0; t < c.opt.trials; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 2), size(2, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = dim(rng);
    Cloud a = random_cloud(rng, n, size(rng));
    Cloud b = random_cloud(rng, n, size(rng));
    if (t == 0) {
      a = {{Vector::Unit(2, 0), Vector::Zero(2)}, "{0, e1}"};
      b = {{Vector::Unit(2, 1), Vector::Zero(2)}, "{0, e2}"};
    }
    const double lambda = t == 1 ? 0.0 : t == 2 ? 1.0 : u(rng);
    SetSpec sa = SetSpec::finite_points(a.points), sb = SetSpec::finite_points(b.points);
    Est ra = c.regret_of(sa, t), rb = c.regret_of(sb, t);
    const std::string label = "A: " + a.label + " | B: " + b.label;

    Est rmix = c.regret_of(SetSpec::finite_points(sum_points(a.points, lambda, b.points, 1.0 - lambda)), t);
    const double convex_comb = lambda * ra.v + (1.0 - lambda) * rb.v;
    if (lambda == 0.0 || lambda == 1.0)
      conc.eq(label + " lambda=" + fmt(lambda), rmix.v, convex_comb, budget({ra, rb, rmix}));
    else
      conc.leq(label + " lambda=" + fmt(lambda), convex_comb, rmix.v, budget({ra, rb, rmix}));

    Est rsum = c.regret_of(SetSpec::minkowski_sum({sa, sb}), t);
    sub.leq(label, rsum.v, ra.v + rb.v, budget({ra, rb, rsum}));

    Est rdiff = c.regret_of(SetSpec::finite_points(sum_points(a.points, 1.0, a.points, -1.0)), t);
    diff.leq("A: " + a.label, rdiff.v, 2.0 * ra.v, budget({rdiff, ra, ra}));
  }
  return {conc.finish(), sub.finish(), diff.finish()};
}

std::vector<PropertyCheck> suite_scaling(const Ctx& c) {
  Check inc("dilation_increasing", kPolicy), slope("dilation_slope_decreasing", kPolicy);
  Check noise("noise_monotone", kPolicy), small("small_scale_ratio", kPolicy);
  Check large("large_scale_wills_gap", kPolicy), seg("segment_curve", kPolicy);
  for (int t = 0; t < c.opt.trials; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 2), size(2, 6), kind(0, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = dim(rng);
    SetSpec s = SetSpec::point(Vector::Zero(1));
    std::string label;
    const int k = kind(rng);
    if (k <= 1) {
      Cloud cl = random_cloud(rng, n, size(rng));
      s = SetSpec::finite_points(cl.points);
      label = cl.label;
    } else if (k == 2) {
      const double r = 0.2 + 2.0 * u(rng);
      s = SetSpec::ball(Vector::Zero(n), r);
      label = "ball n=" + std::to_string(n) + " r=" + fmt(r);
    } else {
      Vector sides(n);
      for (int i = 0; i < n; ++i) sides[i] = 0.2 + 2.0 * u(rng);
      s = SetSpec::box(Vector::Zero(n), sides);
      label = "box sides=" + fmt_vec(sides);
    }
    double lo = std::exp(std::log(0.1) + u(rng) * std::log(50.0));
    double hi = lo * (1.05 + 2.0 * u(rng));
    Est rlo = c.regret_of(SetSpec::scale(lo, s), t), rhi = c.regret_of(SetSpec::scale(hi, s), t);
    const std::string tl = label + " s=" + fmt(lo) + " t=" + fmt(hi);
    inc.leq(tl, rlo.v, rhi.v, budget({rlo, rhi}));
    slope.leq(tl, rhi.v / hi, rlo.v / lo, budget({rlo}) / lo + budget({rhi}) / hi);
    // R*(A, sigma^2) is non-increasing in sigma and sigma R*(A, sigma^2) non-decreasing
    const double s1 = 1.0 / hi, s2 = 1.0 / lo;
    noise.leq(tl + " sigma=" + fmt(s1) + "<" + fmt(s2), s1 * rhi.v, s2 * rlo.v, s1 * budget({rhi}) + s2 * budget({rlo}));
  }

  // small scale: R*(tA) / (t w(A)) -> 1
  {
    const double t = 1e-3;
    struct Item {
      SetSpec s;
      std::string label;
      double width;  // exact width, or NaN for MC with common random numbers
    };
    std::vector<Item> items = {
        {SetSpec::segment(Vector::Zero(1), Vector::Constant(1, 2.0)), "segment length 2", 2.0 / kSqrtTwoPi},
        {SetSpec::ball(Vector::Zero(3), 1.0), "ball n=3 r=1", unit_ball_width(3)},
        {SetSpec::box(Vector::Zero(2), Vector::Ones(2)), "unit square", 2.0 / kSqrtTwoPi},
        {SetSpec::finite_points({Vector::Zero(2), Vector::Unit(2, 0), Vector::Unit(2, 1), Vector::Ones(2) * 0.7}),
         "cloud m=4 n=2", NAN},
        {SetSpec::ellipsoid((Vector(3) << 2.0, 1.0, 0.5).finished()), "ellipsoid (2,1,0.5)", NAN},
    };
    int idx = 0;
    for (const auto& it : items) {
      const MCConfig cfg = c.mc(1000000 + idx++);
      double r, w, se = 0.0;
      if (std::isfinite(it.width)) {
        r = regret_exact(SetSpec::scale(t, it.s)).value;
        w = it.width;
      } else {
        // common random numbers: both estimators read the same Gaussian draws
        RegretEstimate e = regret_mc(SetSpec::scale(t, it.s), cfg);
        WidthEstimate we = gaussian_width_mc(it.s, cfg);
        r = e.value;
        w = we.value;
        se = 0.5 * e.half_width / (t * w) + we.se / w;
      }
      const double dev = std::abs(r / (t * w) - 1.0);
      small.leq(it.label + " t=1e-3", dev, 0.02, 4.0 * se);
    }
  }
  // large scale, Wills form
  {
    LargeScaleReport sq = large_scale_report(SetSpec::box(Vector::Zero(2), Vector::Ones(2)), 50.0);
    large.leq("unit square t=50", std::abs(sq.wills_gap), 0.05, 1e-9);
    LargeScaleReport in = large_scale_report(SetSpec::segment(Vector::Zero(1), Vector::Ones(1)), 100.0);
    large.leq("unit interval t=100", std::abs(in.wills_gap), 0.02, 1e-9);
  }
  // segment of length sqrt(2 pi) theta: quadrature against log(1 + theta)
  for (double theta : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    SetSpec s = SetSpec::segment(Vector::Zero(1), Vector::Constant(1, kSqrtTwoPi * theta));
    QuadratureOptions q;
    q.tol = 1e-7;
    RegretEstimate e = regret_quadrature(s, q);
    seg.eq("theta=" + fmt(theta), e.value, std::log1p(theta), e.half_width);
  }
  return {inc.finish(), slope.finish(), noise.finish(), small.finish(), large.finish(), seg.finish()};
}

std::vector<PropertyCheck> suite_width(const Ctx& c) {
  Check up("mcmullen_upper", kPolicy), low("reverse_lower", kPolicy), convex_low("convex_log_lower", kPolicy);
  for (int t = 0; t < c.opt.trials; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 3), size(2, 8), kind(0, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = dim(rng);
    SetSpec s = SetSpec::point(Vector::Zero(1));
    std::string label;
    const int k = kind(rng);
    if (k <= 1) {
      Cloud cl = random_cloud(rng, n, size(rng));
      s = SetSpec::finite_points(cl.points);
      label = cl.label;
    } else if (k == 2) {
      Ellipsoid e = random_ellipsoid(rng, n);
      s = SetSpec::ellipsoid(e.axes);
      label = e.label;
    } else {
      Vector sides(n);
      for (int i = 0; i < n; ++i) sides[i] = 0.2 + 2.0 * u(rng);
      s = SetSpec::box(Vector::Zero(n), sides);
      label = "box sides=" + fmt_vec(sides);
    }
    Est r = c.regret_of(s, t);
    Est w = c.width_of(s, t);
    up.leq(label, r.v, w.v, budget({r, w}));
    const Diameter d = diameter(s);
    const WidthBounds wb = width_bounds(w.v, d.value, false);
    low.leq(label, wb.lower, r.v, budget({r, w}));
    // an interval attains the convex lower bound
    if (s.is_convex() && n == 1) convex_low.eq(label, std::log1p(w.v), r.v, budget({r, w}));
    else if (s.is_convex()) convex_low.leq(label, std::log1p(w.v), r.v, budget({r, w}));
  }
  return {up.finish(), low.finish(), convex_low.finish()};
}

std::vector<PropertyCheck> suite_redundancy(const Ctx& c) {
  Check red("redundancy_le_regret", kPolicy), brk("redundancy_bounds_bracket", kPolicy);
  for (int t = 0; t < c.opt.trials; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 3), size(3, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = dim(rng);
    if (t % 2 == 0) {
      // two-point sets: the redundancy is known by quadrature
      const double rho = std::exp(std::log(0.1) + u(rng) * std::log(200.0));
      Vector v = Vector::Zero(n);
      v[0] = rho;
      SetSpec s = SetSpec::finite_points({Vector::Zero(n), random_orthogonal(rng, n) * v});
      RedundancyBounds rb = redundancy_bounds(s);
      Est r = c.regret_of(s, t);
      const std::string label = "two points n=" + std::to_string(n) + " rho=" + fmt(rho);
      red.leq(label, rb.exact, r.v, budget({r}) + rb.exact_error);
      brk.leq(label + " lower<=exact", rb.lower, rb.exact, rb.exact_error);
      brk.leq(label + " exact<=upper", rb.exact, rb.upper, rb.exact_error);
    } else {
      Cloud cl = random_cloud(rng, n, size(rng));
      SetSpec s = SetSpec::finite_points(cl.points);
      RedundancyBounds rb = redundancy_bounds(s);
      MixtureInfo mi = mutual_information_mc(cl.points, c.mc(t));
      Est r = c.regret_of(s, t);
      red.leq(cl.label + " mutual information", mi.value, r.v, budget({r, {0.0, 0.0, mi.se}}));
      brk.leq(cl.label + " lower<=upper", rb.lower, rb.upper, 1e-12);
      brk.leq(cl.label + " mutual information<=upper", mi.value, rb.upper, 4.0 * mi.se);
    }
  }
  return {red.finish(), brk.finish()};
}

// Computable bracket [lo, hi] around the minimax redundancy.
struct RedBracket {
  double lo = 0.0, hi = 0.0, se = 0.0;
};

RedBracket redundancy_bracket(const SetSpec& s, const Ctx& c, std::uint64_t instance) {
  RedundancyBounds rb = redundancy_bounds(s);
  RedBracket b{rb.lower, rb.upper, 0.0};
  if (rb.has_exact) b.lo = b.hi = rb.exact;
  if (rb.has_bracket) {
    b.lo = std::max(b.lo, rb.bracket_lower);
    b.hi = std::min(b.hi, rb.bracket_upper);
  }
  if (const auto* pts = finite_points_of(s); pts && !rb.has_exact && !rb.has_bracket) {
    MixtureInfo mi = mutual_information_mc(*pts, c.mc(instance));
    if (mi.value - 4.0 * mi.se > b.lo) {
      b.lo = mi.value;
      b.se = mi.se;
    }
  }
  return b;
}

std::vector<PropertyCheck> suite_characterizations(const Ctx& c) {
  Check fl("regret_fixed_lower", kPolicy), fu("regret_fixed_upper", kPolicy);
  Check sl("regret_sum_lower", kPolicy), su("regret_sum_upper", kPolicy);
  Check rf("redundancy_fixed", kPolicy), rs("redundancy_sum", kPolicy), rel("fixed_point_relation", kPolicy);
  Check el("regret_ellipsoid", kPolicy), ridge("regret_ridge", kPolicy);
  Check re("redundancy_ellipsoid", kPolicy), tq("tilde_q", kPolicy), iso("intrinsic_isomorphic", kPolicy);

  auto profile_checks = [&](const SetSpec& s, const std::string& label, std::uint64_t inst) {
    ProfileOptions po;
    po.mc = {20000, 32, derive_seed(c.suite_seed, Stream::gaussian_vectors, inst)};
    po.se_multiplier = 4.0;
    const ComplexityProfile p = complexity_profile(s, po);
    const Est r = c.regret_of(s, inst);
    const double b = budget({r});
    fl.leq(label + " r*^2/2", 0.5 * p.r_star.lo * p.r_star.lo, r.v, b);
    fl.leq(label + " r~^2/300", p.r_tilde.lo * p.r_tilde.lo / 300.0, r.v, b);
    fu.leq(label, r.v, 2.0 * std::max(p.r_star.hi * p.r_star.hi, p.r_tilde.hi * p.r_tilde.hi), b);
    sl.leq(label, p.inf.width_lo / 600.0, r.v, b);
    su.leq(label, r.v, p.inf.width_hi, b);
    const RedBracket red = redundancy_bracket(s, c, inst);
    const double rb = 4.0 * red.se + 1e-9;
    rf.leq(label + " r~^2/300 <= Red", p.r_tilde.lo * p.r_tilde.lo / 300.0, red.hi, rb);
    rf.leq(label + " Red <= 2 r~^2", red.lo, 2.0 * p.r_tilde.hi * p.r_tilde.hi, rb);
    rs.leq(label + " inf/600 <= Red", p.inf.square_lo / 600.0, red.hi, rb);
    rs.leq(label + " Red <= inf", red.lo, p.inf.square_hi, rb);
    const double tol = 1e-9 * (1.0 + p.inf.square_hi);
    rel.leq(label + " r~^2 <= inf", p.r_tilde.lo * p.r_tilde.lo, p.inf.square_hi, tol);
    rel.leq(label + " inf <= 2 r~^2", p.inf.square_lo, 2.0 * p.r_tilde.hi * p.r_tilde.hi, tol);
    return std::make_pair(r, red);
  };

  const int clouds = std::max(1, c.opt.trials * 3 / 10);
  const int ellipsoids = std::max(1, c.opt.trials / 10);
  const std::vector<double> family = {0.05, 0.1, 0.15, 0.3, 1.0};
  for (int t = 0; t < clouds; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 6), size(2, 8);
    SetSpec s = SetSpec::point(Vector::Zero(1));
    std::string label;
    if (t == 0) {
      s = SetSpec::point(Vector::Zero(2));
      label = "point";
    } else if (t <= static_cast<int>(family.size())) {
      const double tt = family[t - 1];
      s = SetSpec::finite_points({Vector::Zero(1), Vector::Constant(1, kSqrtTwoPi * tt)});
      label = "{0, sqrt(2 pi) t e1} t=" + fmt(tt);
    } else {
      Cloud cl = random_cloud(rng, dim(rng), size(rng));
      s = SetSpec::finite_points(cl.points);
      label = cl.label;
    }
    profile_checks(s, label, t);
  }
  for (int t = 0; t < ellipsoids; ++t) {
    const std::uint64_t inst = 100000 + t;
    Rng rng = c.rng(inst);
    std::uniform_int_distribution<int> dim(2, 8);
    Ellipsoid e = random_ellipsoid(rng, dim(rng));
    if (t == 0) {
      e.axes.resize(8);
      for (int i = 0; i < 8; ++i) e.axes[i] = 1.0 / std::sqrt(i + 1.0);
      e.label = "ellipsoid n=8 a_i=i^-1/2";
    } else if (t == 1) {
      e.axes.resize(8);
      for (int i = 0; i < 8; ++i) e.axes[i] = 1.0 / (i + 1.0);
      e.label = "ellipsoid n=8 a_i=1/i";
    }
    const SetSpec s = SetSpec::ellipsoid(e.axes);
    auto [r, red] = profile_checks(s, e.label, inst);
    const double b = budget({r});
    const double f = ellipsoid_regret_functional(e.axes);
    el.leq(e.label + " F/6000 <= R*", f / 6000.0, r.v, b);
    el.leq(e.label + " R* <= 10 F", r.v, 10.0 * f, b);
    const LambdaChoice lc = choose_lambda(e.axes);
    ridge.leq(e.label + " bound <= 3000 R*", lc.bound, 3000.0 * r.v, 3000.0 * b);
    // the bound dominates the realised regret of q_lambda on any sequence
    const Predictor q = ridge_predictor(e.axes, lc.lambda);
    std::normal_distribution<double> nd;
    double worst = -INFINITY;
    for (int k = 0; k < 20; ++k) {
      Vector y(e.axes.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = 3.0 * e.axes[i] * nd(rng);
      worst = std::max(worst, regret_on_sequence(q, s, y).regret);
    }
    ridge.leq(e.label + " sequence regret <= bound", worst, lc.bound, 1e-9 * (1.0 + lc.bound));
    const double g = ellipsoid_redundancy_functional(e.axes);
    const double rb = 4.0 * red.se + 1e-9;
    re.leq(e.label + " G/600 <= Red", g / 600.0, red.hi, rb);
    re.leq(e.label + " Red <= 5 G", red.lo, 5.0 * g, rb);
    const TildeQ tl = tilde_q_redundancy(e.axes, lc.lambda);
    tq.leq(e.label + " sup KL <= proof bound", tl.sup_kl, tl.proof_bound, 1e-9 * (1.0 + tl.proof_bound));
    tq.leq(e.label + " sup KL <= 1200 Red", tl.sup_kl, 1200.0 * red.hi, 1200.0 * rb);
    tq.leq(e.label + " Red <= sup KL", red.lo, tl.sup_kl, rb);
    // log sum V_j(K) = R*(sqrt(2 pi) K), against the metric infimum of K
    ProfileOptions po;
    po.mc = {20000, 32, derive_seed(c.suite_seed, Stream::gaussian_vectors, inst)};
    po.se_multiplier = 4.0;
    const ComplexityProfile p = complexity_profile(s, po);
    const Est wills = c.regret_of(SetSpec::scale(kSqrtTwoPi, s), inst);
    iso.leq(e.label + " inf/600 <= log W", p.inf.width_lo / 600.0, wills.v, budget({wills}));
    iso.leq(e.label + " log W <= sqrt(2 pi) inf", wills.v, kSqrtTwoPi * p.inf.width_hi, budget({wills}));
  }
  return {fl.finish(), fu.finish(), sl.finish(), su.finish(), rf.finish(), rs.finish(),
          rel.finish(), el.finish(), ridge.finish(), re.finish(), tq.finish(), iso.finish()};
}

std::vector<PropertyCheck> suite_volume_sequence(const Ctx& c) {
  Check lc("poisson_log_concavity", "1e-9 relative slack on exact sequences");
  Check mx("max_intrinsic_sandwich", "1e-12 relative slack on exact sequences");
  for (int t = 0; t < c.opt.trials; ++t) {
    Rng rng = c.rng(t);
    std::uniform_int_distribution<int> dim(1, 20);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = t == 0 ? 20 : dim(rng);
    IntrinsicVolumeSeq seq;
    std::string label;
    if (t % 2 == 0) {
      const double r = 0.1 + 5.0 * u(rng);
      seq = ball_volumes(n, r);
      label = "ball n=" + std::to_string(n) + " r=" + fmt(r);
    } else {
      Vector sides(n);
      for (int i = 0; i < n; ++i) sides[i] = 0.05 + 4.0 * u(rng);
      seq = box_volumes(sides);
      label = "box n=" + std::to_string(n) + " sides=" + fmt_vec(sides);
    }
    const double gap = poisson_log_concavity_gap(seq);
    if (n >= 2) lc.leq(label, gap, 0.0, 1e-9);
    const double scale = std::exp(std::log(0.5) + u(rng) * std::log(200.0));
    const MaxIntrinsicBounds b = max_intrinsic_bounds(seq, scale);
    if (b.applicable) {
      const double slack = 1e-12 * std::max(1.0, std::abs(b.regret));
      mx.leq(label + " t=" + fmt(scale) + " lower", b.lower, b.regret, slack);
      mx.leq(label + " t=" + fmt(scale) + " upper", b.regret, b.upper, slack);
    }
  }
  // segment: the log-concavity range j in [1, n-1] is empty
  (void)c;
  return {lc.finish(), mx.finish()};
}

using SuiteFn = std::vector<PropertyCheck> (*)(const Ctx&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"comparison", suite_comparison},
      {"additive", suite_additive},
      {"scaling", suite_scaling},
      {"width", suite_width},
      {"redundancy", suite_redundancy},
      {"characterizations", suite_characterizations},
      {"volume_sequence", suite_volume_sequence},
  };
  return r;
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opt) {
  if (opt.trials < 1) throw Error("verify: trials must be positive");
  const auto& reg = registry();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg[i].first != name) continue;
    Ctx c{opt, derive_seed(opt.seed, Stream::instances, 1000 + i)};
    SuiteReport rep;
    rep.suite = name;
    rep.checks = reg[i].second(c);
    for (const auto& ch : rep.checks) rep.verdict = worst(rep.verdict, ch.verdict);
    return rep;
  }
  throw Error("verify: unknown suite '" + name + "'");
}

Verdict combine(const std::vector<SuiteReport>& reports) {
  Verdict v = Verdict::pass;
  for (const auto& r : reports) v = worst(v, r.verdict);
  return v;
}

std::string report_json(const std::vector<SuiteReport>& reports, const VerifyOptions& opt) {
  using nlohmann::json;
  auto num = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : x < 0 ? "-inf" : "nan";
  };
  json out;
  out["seed"] = opt.seed;
  out["trials"] = opt.trials;
  out["mc_samples"] = opt.mc_samples;
  out["quad_tol"] = opt.quad_tol;
  out["verdict"] = to_string(combine(reports));
  json suites = json::array();
  for (const auto& r : reports) {
    json js;
    js["suite"] = r.suite;
    js["verdict"] = to_string(r.verdict);
    json checks = json::array();
    for (const auto& ch : r.checks) {
      json jc;
      jc["name"] = ch.name;
      jc["instance_count"] = ch.instance_count;
      jc["violations"] = ch.violations;
      jc["budget_dominated"] = ch.budget_dominated;
      jc["worst_margin"] = num(ch.worst_margin);
      jc["error_budget_policy"] = ch.error_budget_policy;
      jc["verdict"] = to_string(ch.verdict);
      json inst = json::array();
      for (const auto& in : ch.instances) {
        inst.push_back({{"label", in.label},
                        {"lhs", num(in.lhs)},
                        {"rhs", num(in.rhs)},
                        {"budget", num(in.budget)},
                        {"margin", num(in.margin)},
                        {"equality", in.equality},
                        {"violation", in.violation}});
      }
      jc["instances"] = std::move(inst);
      checks.push_back(std::move(jc));
    }
    js["checks"] = std::move(checks);
    suites.push_back(std::move(js));
  }
  out["suites"] = std::move(suites);
  return out.dump(2);
}

std::string summary_table(const std::vector<SuiteReport>& reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %-28s %9s %10s %9s %13s  %s\n", "suite", "check", "instances", "violations",
                "in-budget", "worst margin", "verdict");
  os << line;
  for (const auto& r : reports)
    for (const auto& ch : r.checks) {
      std::snprintf(line, sizeof line, "%-18s %-28s %9d %10d %9d %13.4g  %s\n", r.suite.c_str(), ch.name.c_str(),
                    ch.instance_count, ch.violations, ch.budget_dominated, ch.worst_margin,
                    to_string(ch.verdict).c_str());
      os << line;
    }
  os << "overall: " << to_string(combine(reports)) << "\n";
  return os.str();
}

}  // namespace gauss_regret
