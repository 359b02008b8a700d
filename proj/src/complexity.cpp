#include "gauss_regret/complexity.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/intrinsic.hpp"
#include "gauss_regret/kernels.hpp"

namespace gauss_regret {

WidthEstimate gaussian_width_mc(const SetSpec& s, const MCConfig& cfg) {
  cfg.validate();
  auto plan = cfg.plan(Stream::gaussian_vectors);
  auto means = kernels::batch_mean(plan, s.dim(), [&](const Vector& x) { return support(s, x); });
  kernels::Summary sm = kernels::combine_means(means, plan);
  return {sm.value, sm.se};
}

WidthEstimate gaussian_width_mc_serial(const SetSpec& s, const MCConfig& cfg) {
  cfg.validate();
  auto plan = cfg.plan(Stream::gaussian_vectors);
  auto means = kernels::batch_mean_serial(plan, s.dim(), [&](const Vector& x) { return support(s, x); });
  kernels::Summary sm = kernels::combine_means(means, plan);
  return {sm.value, sm.se};
}

double unit_ball_width(int n) {
  return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Farthest-point traversal over lexicographically sorted points.
void farthest_point(const std::vector<Vector>& pts, std::vector<std::size_t>& order, std::vector<double>& dist) {
  const std::size_t m = pts.size();
  std::vector<double> dmin(m, INFINITY);
  std::vector<bool> used(m, false);
  order.clear();
  dist.clear();
  std::size_t cur = 0;
  double cur_d = INFINITY;
  for (std::size_t step = 0; step < m; ++step) {
    order.push_back(cur);
    dist.push_back(cur_d);
    used[cur] = true;
    for (std::size_t i = 0; i < m; ++i)
      if (!used[i]) dmin[i] = std::min(dmin[i], (pts[i] - pts[cur]).norm());
    cur_d = -1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (!used[i] && dmin[i] > cur_d) {
        cur_d = dmin[i];
        cur = i;
      }
  }
}

// Size of a maximal set with pairwise distances > rad, built greedily in the
// given order. Grid hashing in low dimension.
std::size_t greedy_separated(const std::vector<Vector>& pts, double rad) {
  if (pts.empty()) return 0;
  const int n = static_cast<int>(pts.front().size());
  std::vector<std::size_t> chosen;
  if (n <= 4 && rad > 0.0) {
    std::map<std::vector<long>, std::vector<std::size_t>> cells;
    std::vector<long> key(n), probe(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int k = 0; k < n; ++k) key[k] = static_cast<long>(std::floor(pts[i][k] / rad));
      bool covered = false;
      std::vector<int> off(n, -1);
      while (!covered) {
        for (int k = 0; k < n; ++k) probe[k] = key[k] + off[k];
        auto it = cells.find(probe);
        if (it != cells.end())
          for (std::size_t c : it->second)
            if ((pts[c] - pts[i]).norm() <= rad) {
              covered = true;
              break;
            }
        int k = n - 1;
        while (k >= 0 && ++off[k] == 2) off[k--] = -1;
        if (k < 0) break;
      }
      if (!covered) {
        chosen.push_back(i);
        cells[key].push_back(i);
      }
    }
    return chosen.size();
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool covered = false;
    for (std::size_t c : chosen)
      if ((pts[c] - pts[i]).norm() <= rad) {
        covered = true;
        break;
      }
    if (!covered) chosen.push_back(i);
  }
  return chosen.size();
}

}  // namespace

CoverPack covering_packing(std::vector<Vector> points, double r) {
  if (!(r > 0.0)) throw Error("covering_packing: radius must be positive");
  if (points.empty()) throw Error("covering_packing: empty point list");
  std::stable_sort(points.begin(), points.end(), lex_less);
  return {greedy_separated(points, r), greedy_separated(points, 2.0 * r)};
}

std::vector<double> farthest_point_distances(std::vector<Vector> points) {
  std::stable_sort(points.begin(), points.end(), lex_less);
  std::vector<std::size_t> order;
  std::vector<double> dist;
  farthest_point(points, order, dist);
  return dist;
}

double covering_ellipsoid_sum(const Vector& axes, double r) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < axes.size(); ++i)
    if (axes[i] >= 2.0 * r) s += std::log(axes[i] / r);
  return s;
}

LocalWidthModel::LocalWidthModel(const SetSpec& s, const MCConfig& cfg, int center_budget) : cfg_(cfg) {
  cfg.validate();
  dim_ = s.dim();
  auto draw = [&] {
    x_.resize(static_cast<Eigen::Index>(cfg.samples), dim_);
    auto plan = cfg.plan(Stream::gaussian_vectors);
    Eigen::Index row = 0;
    for (std::size_t b = 0; b < plan.batches; ++b) {
      Rng rng(derive_seed(plan.seed, plan.stream, b));
      std::normal_distribution<double> nd;
      for (std::size_t i = 0; i < plan.batch_size(b); ++i, ++row)
        for (int k = 0; k < dim_; ++k) x_(row, k) = nd(rng);
    }
  };
  if (const auto* f = finite_points_of(s)) {
    route_ = "finite";
    std::vector<Vector> pts = *f;
    std::stable_sort(pts.begin(), pts.end(), lex_less);
    const std::size_t m = pts.size();
    std::vector<std::size_t> centers(m);
    std::iota(centers.begin(), centers.end(), 0);
    if (m > static_cast<std::size_t>(center_budget)) {
      std::vector<std::size_t> order;
      std::vector<double> d;
      farthest_point(pts, order, d);
      centers.assign(order.begin(), order.begin() + center_budget);
      lower_only_ = true;
    }
    draw();
    Matrix p(dim_, static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) p.col(static_cast<Eigen::Index>(i)) = pts[i];
    const Matrix g = x_ * p;
    const auto plan = cfg.plan(Stream::gaussian_vectors);
    curves_.resize(centers.size());
    const long nc = static_cast<long>(centers.size());
#pragma omp parallel for schedule(dynamic)
    for (long ci = 0; ci < nc; ++ci) {
      const std::size_t c = centers[ci];
      std::vector<std::size_t> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      std::vector<double> d(m);
      for (std::size_t i = 0; i < m; ++i) d[i] = (pts[i] - pts[c]).norm();
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
      Eigen::VectorXd run = Eigen::VectorXd::Constant(g.rows(), -INFINITY);
      CenterCurve cv;
      std::vector<double> means(plan.batches);
      for (std::size_t k = 0; k < m; ++k) {
        const auto col = static_cast<Eigen::Index>(idx[k]);
        run = run.cwiseMax(g.col(col));
        cv.dist.push_back(d[idx[k]]);
        if (k == 0) {
          // a single point has width exactly zero
          cv.mean.push_back(0.0);
          cv.se.push_back(0.0);
          continue;
        }
        Eigen::Index row = 0;
        for (std::size_t b = 0; b < plan.batches; ++b) {
          const auto len = static_cast<Eigen::Index>(plan.batch_size(b));
          means[b] = run.segment(row, len).mean();
          row += len;
        }
        kernels::Summary sm = kernels::combine_means(means, plan);
        cv.mean.push_back(sm.value);
        cv.se.push_back(sm.se);
      }
      curves_[ci] = std::move(cv);
    }
    return;
  }
  AffineView v = peel_affine(s);
  factor_ = v.factor;
  if (const auto* b = v.base.as<shape::Ball>()) {
    route_ = "ball";
    axes_ = Vector::Constant(dim_, factor_ * b->radius);
  } else if (const auto* e = v.base.as<shape::Ellipsoid>()) {
    axes_ = factor_ * e->axes;
    route_ = e->axes.maxCoeff() == e->axes.minCoeff() ? "ball" : "ellipsoid";
  } else if (const auto* sg = v.base.as<shape::Segment>()) {
    route_ = "segment";
    length_ = factor_ * (sg->b - sg->a).norm();
  } else if (const auto* l = v.base.as<shape::L1Ball>()) {
    route_ = "l1_ball";
    alpha_ = factor_ * l->alpha;
  } else {
    throw Unsupported("local width: no intersection route for a " + type_name(v.base));
  }
  if (route_ == "ellipsoid" || route_ == "l1_ball") draw();
}

LocalWidth LocalWidthModel::batch_estimate(double r, const std::function<double(const Vector&)>& f) const {
  const auto plan = cfg_.plan(Stream::gaussian_vectors);
  std::vector<double> means(plan.batches);
  Eigen::Index row = 0;
  Vector x(dim_);
  for (std::size_t b = 0; b < plan.batches; ++b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < plan.batch_size(b); ++i, ++row) {
      x = x_.row(row).transpose();
      acc += f(x);
    }
    means[b] = acc / static_cast<double>(plan.batch_size(b));
  }
  kernels::Summary sm = kernels::combine_means(means, plan);
  LocalWidth lw;
  lw.r = r;
  lw.lower = lw.upper = sm.value;
  lw.se = sm.se;
  lw.centers = 1;
  return lw;
}

LocalWidth LocalWidthModel::at(double r) const {
  if (r < 0.0) throw Error("local width: negative radius");
  LocalWidth lw;
  lw.r = r;
  lw.centers = 1;
  if (route_ == "finite") {
    lw.lower = lw.upper = -INFINITY;
    for (const auto& cv : curves_) {
      auto k = std::upper_bound(cv.dist.begin(), cv.dist.end(), r) - cv.dist.begin();
      double v = cv.mean[k - 1];
      if (v > lw.lower) {
        lw.lower = lw.upper = v;
        lw.se = cv.se[k - 1];
      }
    }
    lw.centers = static_cast<int>(curves_.size());
    lw.lower_bound_only = lower_only_;
    return lw;
  }
  if (route_ == "ball") {
    lw.lower = lw.upper = std::min(axes_[0], r) * unit_ball_width(dim_);
    return lw;
  }
  if (route_ == "segment") {
    lw.lower = lw.upper = std::min(2.0 * r, length_) / kSqrtTwoPi;
    return lw;
  }
  if (route_ == "ellipsoid") {
    const Vector l = axes_.cwiseMin(r);
    lw = batch_estimate(r, [&](const Vector& x) { return l.cwiseProduct(x).norm(); });
    lw.upper = std::sqrt(2.0) * lw.lower;
    return lw;
  }
  // l1 ball: h(x) = min_{m >= 0} alpha m + r |(|x| - m)_+|.
  const double alpha = alpha_;
  return batch_estimate(r, [&](const Vector& x) {
    const Eigen::ArrayXd ax = x.cwiseAbs().array();
    auto h = [&](double m) { return alpha * m + r * std::sqrt((ax - m).max(0.0).square().sum()); };
    const double top = ax.maxCoeff();
    double m = golden_section_min(h, 0.0, top, 1e-10 * (1.0 + top));
    return std::min({h(m), h(0.0), h(top)});
  });
}

std::vector<double> LocalWidthModel::breakpoints() const {
  std::vector<double> b;
  for (const auto& cv : curves_) b.insert(b.end(), cv.dist.begin(), cv.dist.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

CoveringModel::CoveringModel(const SetSpec& s, std::size_t sample_budget) : spec_(s), budget_(sample_budget) {
  if (const auto* f = finite_points_of(s)) {
    route_ = "finite";
    fp_ = farthest_point_distances(*f);
    return;
  }
  AffineView v = peel_affine(s);
  factor_ = v.factor;
  if (const auto* b = v.base.as<shape::Ball>()) {
    route_ = "ellipsoid";
    axes_ = Vector::Constant(s.dim(), factor_ * b->radius);
  } else if (const auto* e = v.base.as<shape::Ellipsoid>()) {
    route_ = "ellipsoid";
    axes_ = factor_ * e->axes;
  } else if (const auto* sg = v.base.as<shape::Segment>()) {
    route_ = "segment";
    length_ = factor_ * (sg->b - sg->a).norm();
  } else {
    route_ = "sampled";
  }
}

CoveringBounds CoveringModel::at(double r) const {
  if (!(r > 0.0)) throw Error("covering bounds: radius must be positive");
  CoveringBounds cb;
  cb.r = r;
  if (route_ == "finite") {
    auto count = [&](double rad) {
      return static_cast<double>(std::count_if(fp_.begin(), fp_.end(), [&](double d) { return d > rad; }));
    };
    cb.log_upper = std::log(count(r));
    cb.log_lower = std::log(count(2.0 * r));
    return cb;
  }
  if (route_ == "ellipsoid") {
    cb.log_lower = covering_ellipsoid_sum(axes_, r);
    cb.log_upper = covering_ellipsoid_sum(axes_, r / 5.0);
    return cb;
  }
  if (route_ == "segment") {
    cb.log_lower = cb.log_upper = std::log(std::max(1.0, std::ceil(length_ / (2.0 * r) - 1e-12)));
    return cb;
  }
  // Volumetric bounds: vol(A) <= N kappa r^n, and N(r) <= N_p(r) <= vol(box + r/2 B) / vol(r/2 B).
  const int n = spec_.dim();
  const BoundingBox bb = bounding_box(spec_);
  const double half = 0.5 * r;
  cb.log_upper = std::max(
      0.0, std::log(steiner_parallel_volume(box_volumes(bb.hi - bb.lo), half)) - std::log(kappa(n)) - n * std::log(half));
  try {
    double vol = volume(spec_);
    if (vol > 0.0) cb.log_lower = std::max(0.0, std::log(vol) - std::log(kappa(n)) - n * std::log(r));
  } catch (const Unsupported&) {
  }
  try {
    const double eps = r / 10.0;
    std::vector<Vector> sample = dense_sample(spec_, eps, budget_);
    std::stable_sort(sample.begin(), sample.end(), lex_less);
    cb.log_upper = std::min(cb.log_upper, std::log(static_cast<double>(greedy_separated(sample, r - eps))));
    cb.log_lower = std::max(cb.log_lower, std::log(static_cast<double>(greedy_separated(sample, 2.0 * r))));
    cb.eps = eps;
  } catch (const Unsupported&) {
  }
  return cb;
}

std::vector<double> CoveringModel::breakpoints() const {
  std::vector<double> b;
  for (double d : fp_)
    if (std::isfinite(d)) {
      b.push_back(d);
      b.push_back(0.5 * d);
    }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

namespace {

// sup{r : g(r) >= r^2} when the set of such r is an interval starting at 0.
template <class G>
double bisect_fixed_point(G&& g, double scale) {
  double lo = 1e-12 * scale;
  if (g(lo) < lo * lo) return 0.0;
  double hi = std::max(scale, 1.0);
  int guard = 0;
  while (g(hi) >= hi * hi && guard++ < 200) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) >= mid * mid) lo = mid;
    else hi = mid;
  }
  return lo;
}

// Curve sampled on an increasing grid e_0 < ... < e_K.
struct Curve {
  std::vector<double> r, v;
};

// Step function exactly constant on [e_k, e_{k+1}) (finite routes).
double step_fixed_point(const Curve& c) {
  double best = 0.0;
  for (std::size_t k = 0; k < c.r.size(); ++k) {
    double root = std::sqrt(std::max(c.v[k], 0.0));
    double right = k + 1 < c.r.size() ? c.r[k + 1] : INFINITY;
    if (root >= c.r[k]) best = std::max(best, std::min(root, right));
  }
  return best;
}

// Valid bounds on sup{r : f(r) >= r^2} from grid values of a monotone f.
double grid_fixed_point_upper(const Curve& c, bool increasing) {
  double best = c.r.front();
  const std::size_t K = c.r.size();
  for (std::size_t k = 0; k < K; ++k) {
    // On [e_k, e_{k+1}) f is at most its value at the right end (increasing)
    // or at the left end (decreasing).
    double right = k + 1 < K ? c.r[k + 1] : INFINITY;
    double bound = increasing ? (k + 1 < K ? c.v[k + 1] : c.v[k]) : c.v[k];
    double root = std::sqrt(std::max(bound, 0.0));
    if (root >= c.r[k]) best = std::max(best, std::min(root, right));
  }
  return best;
}

double grid_fixed_point_lower(const Curve& c, bool increasing) {
  double best = 0.0;
  const std::size_t K = c.r.size();
  for (std::size_t k = 0; k < K; ++k) {
    double root = std::sqrt(std::max(c.v[k], 0.0));
    if (root >= c.r[k]) best = std::max(best, c.r[k]);
    if (increasing) {
      double right = k + 1 < K ? c.r[k + 1] : INFINITY;
      if (root >= c.r[k]) best = std::max(best, std::min(root, right));
    } else if (k > 0 && root > c.r[k - 1]) {
      best = std::max(best, std::min(root, c.r[k]));
    }
  }
  return best;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = count == 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return g;
}

}  // namespace

ComplexityProfile complexity_profile(const SetSpec& s, const ProfileOptions& opt) {
  ComplexityProfile p;
  Diameter dm = diameter(s);
  p.diameter = dm.value;
  p.diameter_exact = dm.exact;
  LocalWidthModel wm(s, opt.mc, opt.center_budget);
  CoveringModel cm(s, opt.sample_budget);
  p.width_route = wm.route();
  p.covering_route = cm.route();
  if (!(p.diameter > 0.0)) return p;
  const double k = opt.se_multiplier;
  const bool finite = wm.route() == "finite";

  auto w_lo = [&](const LocalWidth& lw) { return std::max(0.0, lw.lower - k * lw.se); };
  auto w_hi = [&](const LocalWidth& lw) { return lw.upper + k * lw.se; };

  for (double r : log_grid(p.diameter / 1e4, p.diameter, opt.radii)) {
    LocalWidth lw = wm.at(r);
    CoveringBounds cb = cm.at(r);
    p.width_lower_bound_only = p.width_lower_bound_only || lw.lower_bound_only;
    p.rows.push_back({r, 0.5 * (lw.lower + lw.upper), lw.lower, lw.upper, lw.se, cb.log_lower, cb.log_upper});
  }

  // Evaluation grid for the fixed points and infima.
  std::vector<double> grid;
  for (const auto& row : p.rows) grid.push_back(row.r);
  for (double f : {1.25, 1.5, 2.0, 3.0}) grid.push_back(f * p.diameter);
  if (finite) {
    grid.push_back(0.0);
    for (double b : wm.breakpoints()) grid.push_back(b);
    for (double b : cm.breakpoints()) grid.push_back(b);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  Curve wlo, whi, nlo, nhi;
  for (double r : grid) {
    LocalWidth lw = wm.at(r);
    // log N(A, 0) is the number of distinct points
    CoveringBounds cb = r > 0.0 ? cm.at(r) : cm.at(0.5 * grid[1]);
    wlo.r.push_back(r);
    whi.r.push_back(r);
    nlo.r.push_back(r);
    nhi.r.push_back(r);
    wlo.v.push_back(w_lo(lw));
    whi.v.push_back(w_hi(lw));
    nlo.v.push_back(cb.log_lower);
    nhi.v.push_back(cb.log_upper);
  }

  // r*: bisection on the exact model for convex routes, steps otherwise.
  if (wm.ratio_monotone()) {
    p.r_star.lo = bisect_fixed_point([&](double r) { return w_lo(wm.at(r)); }, p.diameter);
    p.r_star.hi = bisect_fixed_point([&](double r) { return w_hi(wm.at(r)); }, p.diameter);
  } else {
    p.r_star.lo = step_fixed_point(wlo);
    p.r_star.hi = step_fixed_point(whi);
  }
  // r~ from the covering bounds.
  if (cm.monotone_exact()) {
    p.r_tilde.lo = bisect_fixed_point([&](double r) { return cm.at(r).log_lower; }, p.diameter);
    p.r_tilde.hi = bisect_fixed_point([&](double r) { return cm.at(r).log_upper; }, p.diameter);
  } else if (cm.route() == "finite") {
    p.r_tilde.lo = step_fixed_point(nlo);
    p.r_tilde.hi = step_fixed_point(nhi);
  } else {
    p.r_tilde.lo = grid_fixed_point_lower(nlo, false);
    p.r_tilde.hi = grid_fixed_point_upper(nhi, false);
  }

  // Infima. Upper ends: point evaluations of upper bounds. Lower ends: on each
  // grid piece, monotone lower bounds (exact values for step functions).
  const std::size_t K = grid.size();
  InfForms& inf = p.inf;
  inf.width_lo = inf.width_hi = inf.square_lo = inf.square_hi = inf.half_square_hi = INFINITY;
  for (std::size_t i = 0; i < K; ++i) {
    const double r = grid[i];
    inf.width_hi = std::min(inf.width_hi, whi.v[i] + nhi.v[i]);
    inf.square_hi = std::min(inf.square_hi, nhi.v[i] + r * r);
    inf.half_square_hi = std::min(inf.half_square_hi, nhi.v[i] + 0.5 * r * r);
    const double n_next = finite ? nlo.v[i] : (i + 1 < K ? nlo.v[i + 1] : 0.0);
    inf.width_lo = std::min(inf.width_lo, wlo.v[i] + n_next);
    inf.square_lo = std::min(inf.square_lo, n_next + r * r);
  }
  if (!finite) {
    // r below the grid: w >= 0 and log N >= its value at the first node.
    inf.width_lo = std::min(inf.width_lo, nlo.v.front());
    inf.square_lo = std::min(inf.square_lo, nlo.v.front());
  }
  const double tol = 1e-9;
  inf.fixed_point_relation = p.r_tilde.lo * p.r_tilde.lo <= inf.square_hi * (1 + tol) + tol &&
                             inf.square_lo <= 2.0 * p.r_tilde.hi * p.r_tilde.hi * (1 + tol) + tol;

  // Entropy numbers e_k = inf{r : N(A, r) <= 2^k}.
  double max_log = 0.0;
  for (double v : nhi.v) max_log = std::max(max_log, v);
  const int kmax = std::min(30, static_cast<int>(std::ceil(max_log / kLog2)));
  for (int kk = 0; kk <= kmax; ++kk) {
    EntropyNumber e;
    e.k = kk;
    e.hi = INFINITY;
    for (std::size_t i = 0; i < K; ++i) {
      if (grid[i] > 0.0 && nhi.v[i] <= kk * kLog2 + 1e-12) e.hi = std::min(e.hi, grid[i]);
      if (nlo.v[i] > kk * kLog2 + 1e-12) e.lo = std::max(e.lo, grid[i]);
    }
    p.entropy.push_back(e);
  }
  return p;
}

}  // namespace gauss_regret
