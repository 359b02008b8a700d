#include "gauss_regret/hull.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <utility>

#include "gauss_regret/errors.hpp"

namespace gauss_regret {

HullProjection project_onto_hull(const std::vector<Vector>& points, const VecRef& x) {
  const int m = static_cast<int>(points.size());
  const int n = static_cast<int>(x.size());
  std::vector<Vector> q(m);
  double scale = 0.0;
  for (int i = 0; i < m; ++i) {
    q[i] = points[i] - x;
    scale = std::max(scale, q[i].squaredNorm());
  }
  const double tol = std::min(1e-9, 1e-12 * (1.0 + scale));
  const int cap = std::max(10 * m * n, 50);

  int start = 0;
  for (int i = 1; i < m; ++i)
    if (q[i].squaredNorm() < q[start].squaredNorm()) start = i;
  std::vector<int> active{start};
  std::vector<double> lambda{1.0};
  Vector w = q[start];

  HullProjection out;
  int iter = 0;
  while (true) {
    int j = 0;
    double best = INFINITY;
    for (int i = 0; i < m; ++i) {
      double d = w.dot(q[i]);
      if (d < best) {
        best = d;
        j = i;
      }
    }
    out.gap = w.squaredNorm() - best;
    if (out.gap <= tol) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);

    while (true) {
      if (++iter > cap) throw ConvergenceError("convex hull projection did not converge within the iteration cap");
      const int k = static_cast<int>(active.size());
      Matrix sys = Matrix::Zero(k + 1, k + 1);
      Vector rhs = Vector::Zero(k + 1);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) sys(a, b) = q[active[a]].dot(q[active[b]]);
        sys(a, k) = 1.0;
        sys(k, a) = 1.0;
      }
      rhs[k] = 1.0;
      Vector sol = sys.completeOrthogonalDecomposition().solve(rhs);
      Vector alpha = sol.head(k);
      bool interior = true;
      for (int a = 0; a < k; ++a)
        if (alpha[a] <= 1e-14) interior = false;
      if (interior) {
        for (int a = 0; a < k; ++a) lambda[a] = alpha[a];
        break;
      }
      double theta = 1.0;
      for (int a = 0; a < k; ++a)
        if (alpha[a] <= 1e-14 && lambda[a] - alpha[a] > 0.0) theta = std::min(theta, lambda[a] / (lambda[a] - alpha[a]));
      std::vector<int> keep_idx;
      std::vector<double> keep_l;
      for (int a = 0; a < k; ++a) {
        double l = lambda[a] + theta * (alpha[a] - lambda[a]);
        if (l > 1e-14) {
          keep_idx.push_back(active[a]);
          keep_l.push_back(l);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(j);
        keep_l.push_back(1.0);
      }
      double s = 0.0;
      for (double l : keep_l) s += l;
      for (double& l : keep_l) l /= s;
      active = std::move(keep_idx);
      lambda = std::move(keep_l);
    }
    w.setZero();
    for (std::size_t a = 0; a < active.size(); ++a) w += lambda[a] * q[active[a]];
  }
  out.point = w + x;
  out.iterations = iter;
  return out;
}

double hull_area_2d(std::vector<Eigen::Vector2d> pts) {
  if (pts.size() < 3) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) area += h[i].x() * h[i + 1].y() - h[i + 1].x() * h[i].y();
  return 0.5 * std::abs(area);
}

double hull_volume_3d(const std::vector<Eigen::Vector3d>& pts) {
  const int m = static_cast<int>(pts.size());
  if (m < 4) return 0.0;
  double span = 0.0;
  for (const auto& p : pts) span = std::max(span, (p - pts[0]).norm());
  if (span == 0.0) return 0.0;
  const double eps = 1e-12 * span;

  // Initial tetrahedron from extreme points.
  int i0 = 0, i1 = 0, i2 = -1, i3 = -1;
  for (int i = 1; i < m; ++i)
    if ((pts[i] - pts[i0]).norm() > (pts[i1] - pts[i0]).norm()) i1 = i;
  if ((pts[i1] - pts[i0]).norm() <= eps) return 0.0;
  const Eigen::Vector3d dir = (pts[i1] - pts[i0]).normalized();
  double best = 0.0;
  for (int i = 0; i < m; ++i) {
    Eigen::Vector3d v = pts[i] - pts[i0];
    double d = (v - v.dot(dir) * dir).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (best <= eps) return 0.0;
  Eigen::Vector3d nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  best = 0.0;
  for (int i = 0; i < m; ++i) {
    double d = std::abs((pts[i] - pts[i0]).dot(nrm));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (best <= eps) return 0.0;

  const Eigen::Vector3d inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  std::vector<std::array<int, 3>> faces;
  auto add_face = [&](int a, int b, int c) {
    Eigen::Vector3d nn = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    if (nn.dot(pts[a] - inside) < 0) std::swap(b, c);
    faces.push_back({a, b, c});
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int p = 0; p < m; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<bool> visible(faces.size(), false);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const auto& fc = faces[f];
      Eigen::Vector3d nn = (pts[fc[1]] - pts[fc[0]]).cross(pts[fc[2]] - pts[fc[0]]);
      double len = nn.norm();
      if (len == 0.0) continue;
      if (nn.dot(pts[p] - pts[fc[0]]) / len > eps) {
        visible[f] = true;
        any = true;
      }
    }
    if (!any) continue;
    std::map<std::pair<int, int>, int> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const auto& fc = faces[f];
      for (int e = 0; e < 3; ++e) edges[{fc[e], fc[(e + 1) % 3]}]++;
    }
    std::vector<std::array<int, 3>> next;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [e, cnt] : edges) {
      if (edges.count({e.second, e.first})) continue;
      next.push_back({e.first, e.second, p});
    }
    faces = std::move(next);
  }
  double vol = 0.0;
  for (const auto& fc : faces)
    vol += (pts[fc[0]] - inside).dot((pts[fc[1]] - inside).cross(pts[fc[2]] - inside));
  return std::abs(vol) / 6.0;
}

double hull_volume(const std::vector<Vector>& points) {
  if (points.empty()) return 0.0;
  const auto n = points.front().size();
  if (n == 1) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  if (n == 2) {
    std::vector<Eigen::Vector2d> pts;
    for (const auto& p : points) pts.emplace_back(p[0], p[1]);
    return hull_area_2d(std::move(pts));
  }
  if (n == 3) {
    std::vector<Eigen::Vector3d> pts;
    for (const auto& p : points) pts.emplace_back(p[0], p[1], p[2]);
    return hull_volume_3d(pts);
  }
  throw Unsupported("hull volume is only implemented in dimensions 1 to 3");
}

}  // namespace gauss_regret
