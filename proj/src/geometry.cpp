#include "gauss_regret/geometry.hpp"

#include <algorithm>
#include <functional>

#include "gauss_regret/errors.hpp"
#include "gauss_regret/hull.hpp"

namespace gauss_regret {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const SetSpec& s, const VecRef& x) {
  if (x.size() != s.dim())
    throw DimensionMismatch("point of dimension " + std::to_string(x.size()) + " against a set in R^" +
                            std::to_string(s.dim()));
}

const SpecNode& mink(const SetSpec& s) {
  const SpecNode& n = s.node();
  if (!n.mink_ok)
    throw UnsupportedComposition(
        "minkowski sum needs at most one non-ball part, or finite parts only");
  return n;
}

int nearest_index(const std::vector<Vector>& pts, const VecRef& x) {
  int best = 0;
  double bd = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = (pts[i] - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double kappa(int n) {
  double a = 1.0, b = 2.0;  // kappa_0, kappa_1
  if (n == 0) return a;
  for (int j = 2; j <= n; ++j) {
    double c = a * kTwoPi / j;
    a = b;
    b = c;
  }
  return b;
}

}  // namespace

EllipsoidFoot ellipsoid_foot(const Vector& axes, const VecRef& y) {
  EllipsoidFoot out;
  const Eigen::ArrayXd a2 = axes.array().square();
  const Eigen::ArrayXd ay2 = a2 * y.array().square();
  if ((y.array() / axes.array()).square().sum() <= 1.0) {
    out.foot = y;
    return out;
  }
  auto f = [&](double mu) { return (ay2 / (a2 + mu).square()).sum() - 1.0; };
  auto fp = [&](double mu) { return -2.0 * (ay2 / (a2 + mu).cube()).sum(); };
  double lo = 0.0, hi = std::sqrt(ay2.sum());
  double mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    out.iterations = it + 1;
    double v = f(mu);
    if (v > 0.0) lo = mu;
    else hi = mu;
    if (v == 0.0) break;
    double next = mu - v / fp(mu);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= 1e-16 * std::max(1.0, mu)) {
      mu = next;
      break;
    }
    mu = next;
  }
  out.mu = mu;
  out.foot = (a2 * y.array() / (a2 + mu)).matrix();
  return out;
}

Vector project_l1_ball(const VecRef& x, double alpha) {
  if (x.lpNorm<1>() <= alpha) return x;
  std::vector<double> u(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) u[i] = std::abs(x[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    double t = (cum - alpha) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double m = std::max(std::abs(x[i]) - tau, 0.0);
    out[i] = x[i] < 0.0 ? -m : m;
  }
  return out;
}

Vector project(const SetSpec& s, const VecRef& x) {
  check_dim(s, x);
  return std::visit(
      overloaded{
          [&](const shape::Point& p) -> Vector { return p.v; },
          [&](const shape::FinitePoints& p) -> Vector { return p.points[nearest_index(p.points, x)]; },
          [&](const shape::Ball& b) -> Vector {
            Vector d = x - b.center;
            double r = d.norm();
            if (r <= b.radius) return x;
            return b.center + d * (b.radius / r);
          },
          [&](const shape::Box& b) -> Vector { return x.cwiseMax(b.corner).cwiseMin(b.corner + b.sides); },
          [&](const shape::Segment& sg) -> Vector {
            Vector d = sg.b - sg.a;
            double l2 = d.squaredNorm();
            if (l2 == 0.0) return sg.a;
            double t = std::clamp((x - sg.a).dot(d) / l2, 0.0, 1.0);
            return sg.a + t * d;
          },
          [&](const shape::Ellipsoid& e) -> Vector {
            Vector y = x - e.center;
            return e.center + ellipsoid_foot(e.axes, y).foot;
          },
          [&](const shape::L1Ball& l) -> Vector { return project_l1_ball(x, l.alpha); },
          [&](const shape::ConvexHull& h) -> Vector { return project_onto_hull(h.points, x).point; },
          [&](const shape::Scale& sc) -> Vector {
            Vector y = x / sc.factor;
            return sc.factor * project(sc.inner, y);
          },
          [&](const shape::Translate& t) -> Vector {
            Vector y = x - t.v;
            return t.v + project(t.inner, y);
          },
          [&](const shape::Product& p) -> Vector {
            Vector out(x.size());
            Eigen::Index off = 0;
            for (const auto& part : p.parts) {
              out.segment(off, part.dim()) = project(part, x.segment(off, part.dim()));
              off += part.dim();
            }
            return out;
          },
          [&](const shape::Union& u) -> Vector {
            Vector best;
            double bd = INFINITY;
            for (const auto& part : u.parts) {
              Vector p = project(part, x);
              double d = (p - x).squaredNorm();
              if (d < bd) {
                bd = d;
                best = std::move(p);
              }
            }
            return best;
          },
          [&](const shape::MinkowskiSum&) -> Vector {
            if (const auto* f = finite_points_of(s)) return (*f)[nearest_index(*f, x)];
            const SpecNode& n = mink(s);
            Vector y = x - n.mink_center;
            Vector p = n.mink_rest ? project(*n.mink_rest, y) : Vector::Zero(x.size());
            Vector d = y - p;
            double r = d.norm();
            if (r <= n.mink_radius) return x;
            return n.mink_center + p + d * (n.mink_radius / r);
          },
      },
      s.node().v);
}

double dist(const SetSpec& s, const VecRef& x) {
  check_dim(s, x);
  return std::visit(
      overloaded{
          [&](const shape::Point& p) { return (x - p.v).norm(); },
          [&](const shape::FinitePoints& p) {
            double bd = INFINITY;
            for (const auto& q : p.points) bd = std::min(bd, (x - q).squaredNorm());
            return std::sqrt(bd);
          },
          [&](const shape::Ball& b) { return std::max((x - b.center).norm() - b.radius, 0.0); },
          [&](const shape::Box& b) {
            double d2 = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              double lo = b.corner[i], hi = b.corner[i] + b.sides[i];
              double e = x[i] < lo ? lo - x[i] : (x[i] > hi ? x[i] - hi : 0.0);
              d2 += e * e;
            }
            return std::sqrt(d2);
          },
          [&](const shape::Ellipsoid& e) {
            Vector y = x - e.center;
            EllipsoidFoot f = ellipsoid_foot(e.axes, y);
            if (f.mu == 0.0) return 0.0;
            // y - foot = mu * y / (a^2 + mu), computed without cancellation.
            return (f.mu * y.array() / (e.axes.array().square() + f.mu)).matrix().norm();
          },
          [&](const shape::Scale& sc) {
            Vector y = x / sc.factor;
            return sc.factor * dist(sc.inner, y);
          },
          [&](const shape::Translate& t) {
            Vector y = x - t.v;
            return dist(t.inner, y);
          },
          [&](const shape::Product& p) {
            double d2 = 0.0;
            Eigen::Index off = 0;
            for (const auto& part : p.parts) {
              double d = dist(part, x.segment(off, part.dim()));
              d2 += d * d;
              off += part.dim();
            }
            return std::sqrt(d2);
          },
          [&](const shape::Union& u) {
            double bd = INFINITY;
            for (const auto& part : u.parts) bd = std::min(bd, dist(part, x));
            return bd;
          },
          [&](const shape::MinkowskiSum&) {
            if (const auto* f = finite_points_of(s)) {
              double bd = INFINITY;
              for (const auto& q : *f) bd = std::min(bd, (x - q).squaredNorm());
              return std::sqrt(bd);
            }
            const SpecNode& n = mink(s);
            Vector y = x - n.mink_center;
            double d = n.mink_rest ? dist(*n.mink_rest, y) : y.norm();
            return std::max(d - n.mink_radius, 0.0);
          },
          [&](const auto&) { return (project(s, x) - x).norm(); },
      },
      s.node().v);
}

double support(const SetSpec& s, const VecRef& x) {
  check_dim(s, x);
  return std::visit(
      overloaded{
          [&](const shape::Point& p) { return p.v.dot(x); },
          [&](const shape::FinitePoints& p) {
            double m = -INFINITY;
            for (const auto& q : p.points) m = std::max(m, q.dot(x));
            return m;
          },
          [&](const shape::Ball& b) { return b.center.dot(x) + b.radius * x.norm(); },
          [&](const shape::Box& b) { return b.corner.dot(x) + b.sides.dot(x.cwiseMax(0.0)); },
          [&](const shape::Segment& sg) { return std::max(sg.a.dot(x), sg.b.dot(x)); },
          [&](const shape::Ellipsoid& e) { return e.center.dot(x) + e.axes.cwiseProduct(x).norm(); },
          [&](const shape::L1Ball& l) { return l.alpha * x.cwiseAbs().maxCoeff(); },
          [&](const shape::ConvexHull& h) {
            double m = -INFINITY;
            for (const auto& q : h.points) m = std::max(m, q.dot(x));
            return m;
          },
          [&](const shape::Scale& sc) { return sc.factor * support(sc.inner, x); },
          [&](const shape::Translate& t) { return t.v.dot(x) + support(t.inner, x); },
          [&](const shape::Product& p) {
            double h = 0.0;
            Eigen::Index off = 0;
            for (const auto& part : p.parts) {
              h += support(part, x.segment(off, part.dim()));
              off += part.dim();
            }
            return h;
          },
          [&](const shape::Union& u) {
            double m = -INFINITY;
            for (const auto& part : u.parts) m = std::max(m, support(part, x));
            return m;
          },
          [&](const shape::MinkowskiSum& m) {
            double h = 0.0;
            for (const auto& part : m.parts) h += support(part, x);
            return h;
          },
      },
      s.node().v);
}

double sup_quadratic(const SetSpec& s, const VecRef& x) {
  if (const auto* f = finite_points_of(s)) {
    check_dim(s, x);
    double m = -INFINITY;
    for (const auto& q : *f) m = std::max(m, q.dot(x) - 0.5 * q.squaredNorm());
    return m;
  }
  double d = dist(s, x);
  return 0.5 * (x.squaredNorm() - d * d);
}

namespace {

double pairwise_diameter(const std::vector<Vector>& pts) {
  double m = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::max(m, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(m);
}

}  // namespace

Diameter diameter(const SetSpec& s) {
  if (const auto* f = finite_points_of(s)) return {pairwise_diameter(*f), true};
  return std::visit(
      overloaded{
          [&](const shape::Ball& b) { return Diameter{2.0 * b.radius, true}; },
          [&](const shape::Box& b) { return Diameter{b.sides.norm(), true}; },
          [&](const shape::Segment& sg) { return Diameter{(sg.b - sg.a).norm(), true}; },
          [&](const shape::Ellipsoid& e) { return Diameter{2.0 * e.axes[0], true}; },
          [&](const shape::L1Ball& l) { return Diameter{2.0 * l.alpha, true}; },
          [&](const shape::ConvexHull& h) { return Diameter{pairwise_diameter(h.points), true}; },
          [&](const shape::Scale& sc) {
            Diameter d = diameter(sc.inner);
            return Diameter{sc.factor * d.value, d.exact};
          },
          [&](const shape::Translate& t) { return diameter(t.inner); },
          [&](const shape::Product& p) {
            double d2 = 0.0;
            bool exact = true;
            for (const auto& part : p.parts) {
              Diameter d = diameter(part);
              d2 += d.value * d.value;
              exact = exact && d.exact;
            }
            return Diameter{std::sqrt(d2), exact};
          },
          [&](const shape::Union& u) {
            // Bounding ball of each part: centre of its box, radius half the box diagonal.
            std::vector<Vector> centers;
            std::vector<double> radii, diams;
            for (const auto& part : u.parts) {
              BoundingBox bb = bounding_box(part);
              centers.push_back(0.5 * (bb.lo + bb.hi));
              radii.push_back(0.5 * (bb.hi - bb.lo).norm());
              diams.push_back(diameter(part).value);
            }
            double m = 0.0;
            for (std::size_t i = 0; i < centers.size(); ++i) {
              m = std::max(m, diams[i]);
              for (std::size_t j = i + 1; j < centers.size(); ++j)
                m = std::max(m, (centers[i] - centers[j]).norm() + radii[i] + radii[j]);
            }
            return Diameter{m, false};
          },
          [&](const shape::MinkowskiSum& ms) {
            double d = 0.0;
            for (const auto& part : ms.parts) d += diameter(part).value;
            return Diameter{d, ms.parts.size() == 1};
          },
          [&](const auto&) { return Diameter{0.0, true}; },
      },
      s.node().v);
}

BoundingBox bounding_box(const SetSpec& s) {
  const int n = s.dim();
  BoundingBox bb{Vector(n), Vector(n)};
  Vector e = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    e[i] = 1.0;
    bb.hi[i] = support(s, e);
    e[i] = -1.0;
    bb.lo[i] = -support(s, e);
    e[i] = 0.0;
  }
  return bb;
}

double volume(const SetSpec& s) {
  const int n = s.dim();
  if (finite_points_of(s)) return 0.0;
  return std::visit(
      overloaded{
          [&](const shape::Ball& b) { return kappa(n) * std::pow(b.radius, n); },
          [&](const shape::Box& b) { return b.sides.prod(); },
          [&](const shape::Segment& sg) { return n == 1 ? (sg.b - sg.a).norm() : 0.0; },
          [&](const shape::Ellipsoid& e) { return kappa(n) * e.axes.prod(); },
          [&](const shape::L1Ball& l) { return std::pow(2.0 * l.alpha, n) / std::tgamma(n + 1.0); },
          [&](const shape::ConvexHull& h) { return hull_volume(h.points); },
          [&](const shape::Scale& sc) { return std::pow(sc.factor, n) * volume(sc.inner); },
          [&](const shape::Translate& t) { return volume(t.inner); },
          [&](const shape::Product& p) {
            double v = 1.0;
            for (const auto& part : p.parts) v *= volume(part);
            return v;
          },
          [&](const auto&) -> double { throw Unsupported("no closed-form volume for a " + type_name(s)); },
      },
      s.node().v);
}

std::vector<Vector> dense_sample(const SetSpec& s, double eps, std::size_t max_points) {
  if (const auto* f = finite_points_of(s)) return *f;
  if (!(eps > 0.0)) throw Error("dense_sample: eps must be positive");
  const int n = s.dim();
  // A lattice of step h puts every point of A within h*sqrt(n)/2 of a node;
  // projecting the nodes that close to A moves them by at most as much.
  const double h = eps / std::sqrt(static_cast<double>(n));
  const double keep = 0.5 * h * std::sqrt(static_cast<double>(n));
  BoundingBox bb = bounding_box(s);
  std::vector<long> counts(n);
  double total = 1.0;
  for (int i = 0; i < n; ++i) {
    counts[i] = static_cast<long>(std::ceil((bb.hi[i] - bb.lo[i] + 2.0 * h) / h)) + 1;
    total *= static_cast<double>(counts[i]);
  }
  if (total > 50.0 * static_cast<double>(max_points))
    throw Unsupported("dense_sample: lattice too large for the point budget");
  std::vector<Vector> out;
  std::vector<long> idx(n, 0);
  Vector g(n);
  while (true) {
    for (int i = 0; i < n; ++i) g[i] = bb.lo[i] - h + h * static_cast<double>(idx[i]);
    if (dist(s, g) <= keep) {
      out.push_back(project(s, g));
      if (out.size() > max_points) throw Unsupported("dense_sample: point budget exceeded");
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == counts[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace gauss_regret
