#include "gauss_regret/coding.hpp"

#include <algorithm>
#include <numeric>

#include "gauss_regret/complexity.hpp"
#include "gauss_regret/errors.hpp"
#include "gauss_regret/geometry.hpp"
#include "gauss_regret/kernels.hpp"

namespace gauss_regret {

namespace {

const double kHalfLogTwoPi = 0.5 * std::log(kTwoPi);

void check_dim(int expected, Eigen::Index got, const char* what) {
  if (got != expected)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
                            std::to_string(got));
}

}  // namespace

GaussianDensity GaussianDensity::diagonal(Vector mean, Vector variances) {
  check_dim(static_cast<int>(mean.size()), variances.size(), "gaussian density");
  if ((variances.array() <= 0.0).any() || !variances.allFinite())
    throw InvalidSpec("gaussian density: variances must be positive");
  return full(std::move(mean), variances.asDiagonal());
}

GaussianDensity GaussianDensity::full(Vector mean, Matrix cov) {
  if (cov.rows() != cov.cols()) throw InvalidSpec("gaussian density: covariance must be square");
  check_dim(static_cast<int>(mean.size()), cov.rows(), "gaussian density");
  if (!cov.isApprox(cov.transpose(), 1e-12)) throw InvalidSpec("gaussian density: covariance must be symmetric");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw InvalidSpec("gaussian density: covariance is not positive definite");
  GaussianDensity g;
  g.mean_ = std::move(mean);
  g.cov_ = std::move(cov);
  g.chol_ = llt.matrixL();
  g.log_det_ = 2.0 * g.chol_.diagonal().array().log().sum();
  return g;
}

double GaussianDensity::log_density(const VecRef& y) const {
  check_dim(dim(), y.size(), "log density");
  // LDLT here, independent of the Cholesky factor used for the conditionals
  Eigen::LDLT<Matrix> ldlt(cov_);
  const Vector d = y - mean_;
  const double quad = d.dot(ldlt.solve(d));
  const double logdet = ldlt.vectorD().array().log().sum();
  return -dim() * kHalfLogTwoPi - 0.5 * logdet - 0.5 * quad;
}

NmlPredictor make_nml(const SetSpec& support, const RegretOptions& opt) {
  return {support, regret(support, opt)};
}

NetMixture make_net_mixture(std::vector<Vector> centers, std::vector<double> weights) {
  if (centers.empty()) throw InvalidSpec("net mixture: no centers");
  if (centers.size() != weights.size()) throw InvalidSpec("net mixture: one weight per center");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidSpec("net mixture: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidSpec("net mixture: weights must sum to 1");
  for (const auto& c : centers) check_dim(static_cast<int>(centers.front().size()), c.size(), "net mixture");
  return {std::move(centers), std::move(weights)};
}

NetMixture uniform_mixture(std::vector<Vector> centers) {
  std::vector<double> w(centers.size(), 1.0 / static_cast<double>(centers.size()));
  return make_net_mixture(std::move(centers), std::move(w));
}

int predictor_dim(const Predictor& p) {
  return std::visit(
      [](const auto& q) -> int {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, NmlPredictor>) return q.support.dim();
        else if constexpr (std::is_same_v<T, GaussianDensity>) return q.dim();
        else return static_cast<int>(q.centers.front().size());
      },
      p);
}

double log_density(const Predictor& p, const VecRef& y) {
  check_dim(predictor_dim(p), y.size(), "log density");
  const int n = static_cast<int>(y.size());
  if (const auto* g = std::get_if<GaussianDensity>(&p)) return g->log_density(y);
  if (const auto* m = std::get_if<NetMixture>(&p)) {
    std::vector<double> terms;
    for (std::size_t k = 0; k < m->centers.size(); ++k)
      if (m->weights[k] > 0.0)
        terms.push_back(std::log(m->weights[k]) - 0.5 * (y - m->centers[k]).squaredNorm());
    return log_sum_exp(terms) - n * kHalfLogTwoPi;
  }
  const auto& nml = std::get<NmlPredictor>(p);
  const double d = dist(nml.support, y);
  return -n * kHalfLogTwoPi - 0.5 * d * d - nml.normalizer.value;
}

LossRecord sequential_predict(const Predictor& p, const VecRef& y) {
  check_dim(predictor_dim(p), y.size(), "sequential predict");
  const Eigen::Index n = y.size();
  LossRecord rec;
  if (std::holds_alternative<NmlPredictor>(p))
    throw NotSequential("sequential predict: NML is evaluated jointly only");
  if (const auto* g = std::get_if<GaussianDensity>(&p)) {
    // Cholesky is the recursive Schur complement: with y = mean + L z, the
    // conditional of y_i given y_<i has mean mean_i + sum_{j<i} L_ij z_j and
    // variance L_ii^2.
    const Matrix& l = g->chol();
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double cmean = g->mean()[i];
      for (Eigen::Index j = 0; j < i; ++j) cmean += l(i, j) * z[j];
      const double sd = l(i, i);
      z[i] = (y[i] - cmean) / sd;
      rec.per_step.push_back(kHalfLogTwoPi + std::log(sd) + 0.5 * z[i] * z[i]);
    }
  } else {
    const auto& m = std::get<NetMixture>(p);
    const std::size_t k = m.centers.size();
    std::vector<double> logw(k);
    for (std::size_t c = 0; c < k; ++c) logw[c] = m.weights[c] > 0.0 ? std::log(m.weights[c]) : -INFINITY;
    std::vector<double> terms(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        const double r = y[i] - m.centers[c][i];
        terms[c] = logw[c] - 0.5 * r * r;
      }
      const double lse = log_sum_exp(terms);
      rec.per_step.push_back(kHalfLogTwoPi - lse);
      // posterior update
      for (std::size_t c = 0; c < k; ++c) logw[c] = terms[c] - lse;
    }
  }
  rec.cumulative = std::accumulate(rec.per_step.begin(), rec.per_step.end(), 0.0);
  rec.regret = rec.cumulative;
  return rec;
}

LossRecord regret_on_sequence(const Predictor& p, const SetSpec& comparator, const VecRef& y) {
  check_dim(comparator.dim(), y.size(), "regret on sequence");
  LossRecord rec;
  if (std::holds_alternative<NmlPredictor>(p)) rec.cumulative = -log_density(p, y);
  else rec = sequential_predict(p, y);
  const double d = dist(comparator, y);
  rec.comparator_loss = static_cast<double>(y.size()) * kHalfLogTwoPi + 0.5 * d * d;
  rec.regret = rec.cumulative - rec.comparator_loss;
  return rec;
}

GaussianDensity ridge_predictor(const Vector& axes, double lambda) {
  if (!(lambda > 0.0)) throw InvalidSpec("ridge predictor: lambda must be positive");
  return GaussianDensity::diagonal(Vector::Zero(axes.size()),
                                   (1.0 + axes.array().square() / lambda).matrix());
}

RidgeIdentity ridge_identity(const Vector& axes, double lambda, const VecRef& y) {
  check_dim(static_cast<int>(axes.size()), y.size(), "ridge identity");
  GaussianDensity q = ridge_predictor(axes, lambda);
  RidgeIdentity r;
  r.loss = -q.log_density(y);
  // penalized problem solved coordinatewise: theta_i = y_i / (1 + lambda / a_i^2)
  const Eigen::ArrayXd a2 = axes.array().square();
  const Eigen::ArrayXd theta = y.array() / (1.0 + lambda / a2);
  const double fit = 0.5 * (theta - y.array()).square().sum();
  const double pen = 0.5 * lambda * (theta.square() / a2).sum();
  r.penalized_inf = static_cast<double>(y.size()) * kHalfLogTwoPi + fit + pen;
  r.lhs = r.loss - r.penalized_inf;
  r.rhs = 0.5 * (a2 / lambda).log1p().sum();
  return r;
}

LambdaChoice choose_lambda(const Vector& axes) {
  const Eigen::ArrayXd a2 = axes.array().square();
  auto bound = [&](double u) {
    const double lambda = std::exp(u);
    return 0.5 * (a2 / lambda).log1p().sum() + 0.5 * lambda;
  };
  const double lo = std::log(1e-8), hi = std::log(a2.sum() + 1.0);
  const int grid = 240;
  int best = 0;
  double best_v = INFINITY;
  for (int i = 0; i <= grid; ++i) {
    double v = bound(lo + (hi - lo) * i / grid);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double step = (hi - lo) / grid;
  const double u0 = lo + step * std::max(0, best - 1), u1 = lo + step * std::min(grid, best + 1);
  double u = golden_section_min(bound, u0, u1, 1e-8);
  double v = bound(u);
  if (v > best_v) {
    u = lo + step * best;
    v = best_v;
  }
  return {std::exp(u), v};
}

double kl(const VecRef& theta, const GaussianDensity& q) {
  check_dim(q.dim(), theta.size(), "kl");
  const Matrix& l = q.chol();
  const int n = q.dim();
  const Matrix linv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  const double trace_inv = linv.squaredNorm();
  const Vector z = l.triangularView<Eigen::Lower>().solve(theta - q.mean());
  return 0.5 * (q.log_det() - n + trace_inv) + 0.5 * z.squaredNorm();
}

double two_point_tv(double rho) { return std::erf(std::abs(rho) / (2.0 * std::sqrt(2.0))); }

double mixture_kl_1d(double theta, const std::vector<double>& centers) {
  if (centers.empty()) throw Error("mixture kl: no centers");
  // E_Z[-Z^2/2 - log mean_j exp(-(theta + Z - c_j)^2 / 2)], trapezoid on [-12, 12]
  const double h = 5e-4, span = 12.0;
  const long nodes = static_cast<long>(std::lround(2.0 * span / h));
  const double logn = std::log(static_cast<double>(centers.size()));
  std::vector<double> terms(centers.size());
  double acc = 0.0;
  for (long k = 0; k <= nodes; ++k) {
    const double z = -span + h * static_cast<double>(k);
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double r = theta + z - centers[j];
      terms[j] = -0.5 * r * r;
    }
    const double g = -0.5 * z * z - log_sum_exp(terms) + logn;
    const double w = (k == 0 || k == nodes) ? 0.5 : 1.0;
    acc += w * g * std::exp(-0.5 * z * z);
  }
  return acc * h / kSqrtTwoPi;
}

double two_point_redundancy(double rho) { return mixture_kl_1d(0.0, {0.0, std::abs(rho)}); }

MixtureInfo mutual_information_mc(const std::vector<Vector>& points, const MCConfig& cfg) {
  if (points.empty()) throw Error("mutual information: no points");
  cfg.validate();
  const auto plan = cfg.plan(Stream::sampling);
  const double logn = std::log(static_cast<double>(points.size()));
  const int n = static_cast<int>(points.front().size());
  auto means = kernels::batch_mean(plan, n, [&](const Vector& x) {
    std::vector<double> terms(points.size());
    double acc = 0.0;
    for (const auto& ti : points) {
      for (std::size_t j = 0; j < points.size(); ++j) terms[j] = -0.5 * (ti + x - points[j]).squaredNorm();
      acc += -0.5 * x.squaredNorm() - log_sum_exp(terms) + logn;
    }
    return acc / static_cast<double>(points.size());
  });
  kernels::Summary sm = kernels::combine_means(means, plan);
  return {sm.value, sm.se};
}

RedundancyBounds redundancy_bounds(const SetSpec& s, const RedundancyOptions& opt) {
  RedundancyBounds rb;
  const Diameter dm = diameter(s);
  rb.lower_route = "trivial";
  if (!(dm.value > 0.0)) return rb;
  if (dm.exact) rb.pinsker = 0.5 * std::pow(two_point_tv(dm.value), 2);

  CoveringModel cm(s, opt.sample_budget);
  // one center covers at radius diam
  rb.upper = 0.5 * dm.value * dm.value;
  rb.upper_radius = dm.value;
  std::vector<double> grid;
  const double lo = dm.value / 1e4;
  for (int i = 0; i < opt.radii; ++i)
    grid.push_back(lo * std::pow(dm.value / lo, static_cast<double>(i) / std::max(1, opt.radii - 1)));
  for (double b : cm.breakpoints())
    if (b > 0.0) grid.push_back(b);
  const auto* pts = finite_points_of(s);
  if (pts) {
    // r -> 0: one center per distinct point
    CoveringBounds tiny = cm.at(1e-300);
    if (tiny.log_upper < rb.upper) {
      rb.upper = tiny.log_upper;
      rb.upper_radius = 0.0;
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double packing = -INFINITY;
  for (double r : grid) {
    const CoveringBounds cb = cm.at(r);
    const double up = cb.log_upper + 0.5 * r * r;
    if (up < rb.upper) {
      rb.upper = up;
      rb.upper_radius = r;
    }
    // at least exp(log_lower) points pairwise more than r apart
    const double count = std::floor(std::exp(cb.log_lower) + 1e-9);
    if (count >= 2.0 && r * r >= 32.0 * std::log(count)) packing = std::max(packing, std::log(count) - 3.0);
  }
  if (pts) {
    // the first N farthest-point insertions are pairwise at least d_N apart
    const std::vector<double> d = farthest_point_distances(*pts);
    for (std::size_t k = 1; k < d.size(); ++k) {
      const double count = static_cast<double>(k + 1);
      if (d[k] > 0.0 && d[k] * d[k] >= 32.0 * std::log(count)) packing = std::max(packing, std::log(count) - 3.0);
    }
  }
  rb.packing = std::max(0.0, packing);
  rb.lower = std::max(rb.pinsker, rb.packing);
  if (rb.lower > 0.0) rb.lower_route = rb.packing > rb.pinsker ? "packing" : "pinsker";

  if (pts) {
    std::vector<Vector> distinct;
    for (const auto& p : *pts)
      if (std::none_of(distinct.begin(), distinct.end(), [&](const Vector& q) { return q == p; })) distinct.push_back(p);
    if (distinct.size() == 2) {
      rb.has_exact = true;
      rb.exact = two_point_redundancy((distinct[0] - distinct[1]).norm());
      rb.exact_error = 1e-9;
    }
    if (s.dim() == 1 && distinct.size() <= 16) {
      std::vector<double> c;
      for (const auto& p : distinct) c.push_back(p[0]);
      double mi = 0.0, sup = 0.0;
      for (double t : c) {
        double v = mixture_kl_1d(t, c);
        mi += v / static_cast<double>(c.size());
        sup = std::max(sup, v);
      }
      rb.has_bracket = true;
      rb.bracket_lower = mi;
      rb.bracket_upper = sup;
    }
  }
  return rb;
}

TildeQ tilde_q_redundancy(const Vector& axes, double lambda) {
  if (!(lambda > 0.0)) throw InvalidSpec("tilde q: lambda must be positive");
  const double r = std::sqrt(lambda);
  const Eigen::ArrayXd a2 = axes.array().square();
  Eigen::ArrayXd var(axes.size());
  double proof = 2.0 * lambda;
  for (Eigen::Index i = 0; i < axes.size(); ++i) {
    const bool big = axes[i] >= 2.0 * r;
    var[i] = 1.0 + (big ? a2[i] / lambda : 0.0);
    if (big) proof += 0.5 * std::log1p(a2[i] / lambda);
  }
  TildeQ t{GaussianDensity::diagonal(Vector::Zero(axes.size()), var.matrix()), 0.0, proof};
  // <Sigma^-1 theta, theta> is linear in theta_i^2 on the simplex sum theta_i^2/a_i^2 <= 1
  const double constant = 0.5 * (var.log() - 1.0 + 1.0 / var).sum();
  t.sup_kl = constant + 0.5 * (a2 / var).maxCoeff();
  return t;
}

}  // namespace gauss_regret
