#include "gauss_regret/intrinsic.hpp"

#include <algorithm>

#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/hull.hpp"

namespace gauss_regret {

double kappa(int j) {
  if (j < 0) throw Error("kappa: negative dimension");
  double a = 1.0, b = 2.0;
  if (j == 0) return a;
  for (int k = 2; k <= j; ++k) {
    double c = a * kTwoPi / k;
    a = b;
    b = c;
  }
  return b;
}

KappaTable::KappaTable(int max_dim) : k_(static_cast<std::size_t>(max_dim) + 1) {
  for (int j = 0; j <= max_dim; ++j) k_[j] = j == 0 ? 1.0 : (j == 1 ? 2.0 : k_[j - 2] * kTwoPi / j);
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

IntrinsicVolumeSeq exact_seq(std::vector<double> v) {
  IntrinsicVolumeSeq s;
  s.dim = static_cast<int>(v.size()) - 1;
  s.std_errors.assign(v.size(), 0.0);
  s.values = std::move(v);
  return s;
}

double factorial(int j) { return std::tgamma(j + 1.0); }

}  // namespace

IntrinsicVolumeSeq ball_volumes(int n, double r) {
  KappaTable k(n);
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = binom(n, j) * k[n] / k[n - j] * std::pow(r, j);
  return exact_seq(std::move(v));
}

IntrinsicVolumeSeq box_volumes(const Vector& sides) {
  // Coefficients of prod_i (1 + a_i t) are the elementary symmetric polynomials.
  std::vector<double> c{1.0};
  for (Eigen::Index i = 0; i < sides.size(); ++i) {
    c.push_back(0.0);
    for (std::size_t j = c.size() - 1; j >= 1; --j) c[j] += sides[i] * c[j - 1];
  }
  return exact_seq(std::move(c));
}

IntrinsicVolumeSeq product_volumes(const IntrinsicVolumeSeq& a, const IntrinsicVolumeSeq& b) {
  std::vector<double> v(a.values.size() + b.values.size() - 1, 0.0);
  std::vector<double> se2(v.size(), 0.0);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    for (std::size_t j = 0; j < b.values.size(); ++j) {
      v[i + j] += a.values[i] * b.values[j];
      se2[i + j] += std::pow(a.std_errors[i] * b.values[j], 2) + std::pow(a.values[i] * b.std_errors[j], 2);
    }
  IntrinsicVolumeSeq s = exact_seq(std::move(v));
  for (std::size_t k = 0; k < se2.size(); ++k) s.std_errors[k] = std::sqrt(se2[k]);
  bool mc = a.provenance == Provenance::monte_carlo || b.provenance == Provenance::monte_carlo;
  s.provenance = mc ? Provenance::monte_carlo : Provenance::exact;
  return s;
}

IntrinsicVolumeSeq dilate(const IntrinsicVolumeSeq& s, double t) {
  IntrinsicVolumeSeq out = s;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    double f = std::pow(t, static_cast<double>(j));
    out.values[j] *= f;
    out.std_errors[j] *= f;
  }
  return out;
}

std::optional<IntrinsicVolumeSeq> exact_volumes(const SetSpec& s) {
  const int n = s.dim();
  if (const auto* f = finite_points_of(s); f && f->size() == 1) {
    std::vector<double> v(n + 1, 0.0);
    v[0] = 1.0;
    return exact_seq(std::move(v));
  }
  if (const auto* sg = s.as<shape::Segment>()) {
    std::vector<double> v(n + 1, 0.0);
    v[0] = 1.0;
    v[1] = (sg->b - sg->a).norm();
    return exact_seq(std::move(v));
  }
  if (const auto* b = s.as<shape::Ball>()) return ball_volumes(n, b->radius);
  if (const auto* b = s.as<shape::Box>()) return box_volumes(b->sides);
  if (const auto* e = s.as<shape::Ellipsoid>()) {
    if (e->axes.maxCoeff() == e->axes.minCoeff()) return ball_volumes(n, e->axes[0]);
    return std::nullopt;
  }
  if (const auto* sc = s.as<shape::Scale>()) {
    auto inner = exact_volumes(sc->inner);
    if (!inner) return std::nullopt;
    return dilate(*inner, sc->factor);
  }
  if (const auto* t = s.as<shape::Translate>()) return exact_volumes(t->inner);
  if (const auto* p = s.as<shape::Product>()) {
    std::optional<IntrinsicVolumeSeq> acc;
    for (const auto& part : p->parts) {
      auto v = exact_volumes(part);
      if (!v) return std::nullopt;
      acc = acc ? product_volumes(*acc, *v) : *v;
    }
    return acc;
  }
  return std::nullopt;
}

McValue mc_tsirelson(const SetSpec& s, int j, const MCConfig& cfg) {
  cfg.validate();
  const int n = s.dim();
  if (j < 1 || j > n) throw Error("mc_tsirelson: j must lie in 1..dim");
  const AffineView view = peel_affine(s);
  const double scale = std::pow(view.factor, j);
  const double jfact = factorial(j);
  std::vector<double> means;
  if (const auto* e = view.base.as<shape::Ellipsoid>()) {
    const Vector a = e->axes;
    means = kernels::for_each_batch(cfg.plan(Stream::gaussian_matrices), [&](std::size_t b, Rng& rng) {
      std::normal_distribution<double> nd;
      Matrix g(j, n);
      const std::size_t m = cfg.plan(Stream::gaussian_matrices).batch_size(b);
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (int c = 0; c < n; ++c)
          for (int r = 0; r < j; ++r) g(r, c) = nd(rng) * a[c];
        acc += std::sqrt(std::max((g * g.transpose()).determinant(), 0.0));
      }
      return acc / static_cast<double>(m);
    });
  } else if (const auto* h = view.base.as<shape::ConvexHull>()) {
    if (j > 3) throw Unsupported("mc_tsirelson: convex hulls are supported for j <= 3 only");
    const double kj = kappa(j);
    const auto& pts = h->points;
    means = kernels::for_each_batch(cfg.plan(Stream::gaussian_matrices), [&](std::size_t b, Rng& rng) {
      std::normal_distribution<double> nd;
      Matrix g(j, n);
      std::vector<Vector> proj(pts.size());
      const std::size_t m = cfg.plan(Stream::gaussian_matrices).batch_size(b);
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (int c = 0; c < n; ++c)
          for (int r = 0; r < j; ++r) g(r, c) = nd(rng);
        for (std::size_t p = 0; p < pts.size(); ++p) proj[p] = g * pts[p];
        acc += hull_volume(proj) / kj;
      }
      return acc / static_cast<double>(m);
    });
  } else {
    throw Unsupported("mc_tsirelson: only ellipsoids and convex hulls are supported, got " + type_name(view.base));
  }
  kernels::Summary sm = kernels::combine_means(means, cfg.plan(Stream::gaussian_matrices));
  return {scale * sm.value / jfact, scale * sm.se / jfact};
}

IntrinsicVolumeSeq mc_intrinsic_volumes(const SetSpec& s, const MCConfig& cfg) {
  const int n = s.dim();
  IntrinsicVolumeSeq out;
  out.dim = n;
  out.provenance = Provenance::monte_carlo;
  out.values.assign(n + 1, 0.0);
  out.std_errors.assign(n + 1, 0.0);
  out.values[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    McValue v = mc_tsirelson(s, j, cfg);
    double f = std::pow(kSqrtTwoPi, j);
    out.values[j] = v.value * f;
    out.std_errors[j] = v.se * f;
  }
  return out;
}

McValue mc_kubota_v1(const SetSpec& s, const MCConfig& cfg) {
  cfg.validate();
  const int n = s.dim();
  const double c = n * kappa(n) / (kappa(1) * kappa(n - 1));
  auto means = kernels::batch_mean(cfg.plan(Stream::gaussian_vectors), n, [&](const Vector& x) {
    Vector u = x / x.norm();
    Vector v = -u;
    return support(s, u) + support(s, v);
  });
  kernels::Summary sm = kernels::combine_means(means, cfg.plan(Stream::gaussian_vectors));
  return {c * sm.value, c * sm.se};
}

double steiner_parallel_volume(const IntrinsicVolumeSeq& s, double r) {
  const int n = s.dim;
  double v = 0.0;
  for (int j = 0; j <= n; ++j) v += s.values[n - j] * kappa(j) * std::pow(r, j);
  return v;
}

McValue regret_from_volumes(const IntrinsicVolumeSeq& s, double t) {
  const double c = t / kSqrtTwoPi;
  std::vector<double> logs;
  for (std::size_t j = 0; j < s.values.size(); ++j)
    if (s.values[j] > 0.0) logs.push_back(std::log(s.values[j]) + static_cast<double>(j) * std::log(c));
  McValue out;
  out.value = log_sum_exp(logs);
  double var = 0.0;
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    double term = s.std_errors[j] * std::pow(c, static_cast<double>(j));
    var += term * term;
  }
  out.se = std::sqrt(var) / std::exp(out.value);
  return out;
}

MaxIntrinsicBounds max_intrinsic_bounds(const IntrinsicVolumeSeq& s, double t) {
  MaxIntrinsicBounds b;
  const int n = s.dim;
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = s.values[j] * std::pow(t / kSqrtTwoPi, j);
  b.v1 = n >= 1 ? v[1] : 0.0;
  b.regret = regret_from_volumes(s, t).value;
  b.applicable = b.v1 >= 2.0;
  double mx = 0.0;
  for (int j = 1; j <= n; ++j)
    if (v[j] > mx) {
      mx = v[j];
      b.argmax = j;
    }
  double mx2 = 0.0;
  for (int k = 1; k <= n; k *= 2) mx2 = std::max(mx2, v[k]);
  b.lower = std::log(mx);
  b.upper = 8.0 * std::log(mx2);
  b.four_log_max = 4.0 * std::log(mx);
  const double slack = 1e-12 * std::max(1.0, std::abs(b.regret));
  b.holds = b.applicable && b.lower <= b.regret + slack && b.regret <= b.upper + slack;
  return b;
}

RissanenReport rissanen_report(const IntrinsicVolumeSeq& s, double sample_size) {
  const int d = s.dim;
  if (d < 1 || !(s.values[d] > 0.0)) throw Error("rissanen_report: the body must have positive volume");
  RissanenReport r;
  r.sample_size = sample_size;
  const double t = std::sqrt(sample_size / kTwoPi);
  r.expansion = 0.5 * d * std::log(sample_size / kTwoPi) + std::log(s.values[d]);
  r.regret = regret_from_volumes(s, std::sqrt(sample_size)).value;
  double best = -INFINITY;
  for (int j = 1; j <= d; ++j) {
    double v = s.values[j] * std::pow(t, j);
    if (v > best) {
      best = v;
      r.dominant_index = j;
    }
  }
  const double top = s.values[d] * std::pow(t, d);
  const double below = s.values[d - 1] * std::pow(t, d - 1);
  r.top_dominates = top >= below;
  const double ratio = s.values[d - 1] / s.values[d];
  r.direct_threshold = kTwoPi * ratio * ratio;
  const double surface_over_volume = 2.0 * ratio;
  r.surface_threshold = 8.0 * kPi * surface_over_volume * surface_over_volume;
  return r;
}

double poisson_log_concavity_gap(const IntrinsicVolumeSeq& s) {
  double worst = -INFINITY;
  for (int j = 1; j < s.dim; ++j) {
    double lhs = (j + 1) * s.values[j + 1] * s.values[j - 1];
    double rhs = j * s.values[j] * s.values[j];
    if (rhs <= 0.0) {
      if (lhs > 0.0) return INFINITY;
      continue;
    }
    worst = std::max(worst, (lhs - rhs) / rhs);
  }
  return worst;
}

}  // namespace gauss_regret
