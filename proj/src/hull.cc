#include "hull.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dcsplit::detail {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double scale_of(std::span<const Vec> points) {
  double s = 0.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(s, 1.0);
}

Hull hull_1d(std::span<const Vec> points) {
  double lo = points[0][0], hi = points[0][0];
  for (const auto& p : points) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  Hull h;
  h.vertices = {Vec::Constant(1, lo), Vec::Constant(1, hi)};
  h.normals = Mat(2, 1);
  h.normals << -1.0, 1.0;
  h.offsets = Vec(2);
  h.offsets << -lo, hi;
  return h;
}

Hull hull_2d(std::span<const Vec> points, double tol) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.emplace_back(p[0], p[1]);
  std::vector<int> idx = planar_hull(pts, tol);
  Hull h;
  for (int i : idx) h.vertices.push_back(points[static_cast<size_t>(i)]);
  const Index m = static_cast<Index>(h.vertices.size());
  h.normals = Mat(m, 2);
  h.offsets = Vec(m);
  for (Index i = 0; i < m; ++i) {
    const Vec& a = h.vertices[static_cast<size_t>(i)];
    const Vec& b = h.vertices[static_cast<size_t>((i + 1) % m)];
    Eigen::Vector2d nrm(b[1] - a[1], -(b[0] - a[0]));
    nrm.normalize();
    h.normals.row(i) = nrm.transpose();
    h.offsets[i] = nrm.dot(Eigen::Vector2d(a[0], a[1]));
  }
  return h;
}

Hull hull_3d(std::span<const Vec> points, double tol) {
  const size_t m = points.size();
  struct Plane {
    Eigen::Vector3d normal;
    double offset;
  };
  std::vector<Plane> planes;
  auto p3 = [&](size_t i) { return Eigen::Vector3d(points[i][0], points[i][1], points[i][2]); };

  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      for (size_t k = j + 1; k < m; ++k) {
        Eigen::Vector3d nrm = (p3(j) - p3(i)).cross(p3(k) - p3(i));
        if (nrm.norm() <= tol) continue;
        nrm.normalize();
        double off = nrm.dot(p3(i));
        bool any_above = false, any_below = false;
        for (size_t q = 0; q < m; ++q) {
          double d = nrm.dot(p3(q)) - off;
          any_above |= d > tol;
          any_below |= d < -tol;
        }
        if (any_above && any_below) continue;
        if (any_above) {
          nrm = -nrm;
          off = -off;
        }
        bool seen = std::any_of(planes.begin(), planes.end(), [&](const Plane& pl) {
          return (pl.normal - nrm).norm() <= 1e-9 && std::abs(pl.offset - off) <= tol;
        });
        if (!seen) planes.push_back({nrm, off});
      }
    }
  }

  Hull h;
  std::vector<int> vertex_of(m, -1);
  auto intern = [&](size_t i) {
    if (vertex_of[i] < 0) {
      vertex_of[i] = static_cast<int>(h.vertices.size());
      h.vertices.push_back(points[i]);
    }
    return vertex_of[i];
  };

  h.normals = Mat(static_cast<Index>(planes.size()), 3);
  h.offsets = Vec(static_cast<Index>(planes.size()));
  for (size_t f = 0; f < planes.size(); ++f) {
    const Plane& pl = planes[f];
    h.normals.row(static_cast<Index>(f)) = pl.normal.transpose();
    h.offsets[static_cast<Index>(f)] = pl.offset;

    std::vector<size_t> on_face;
    for (size_t q = 0; q < m; ++q)
      if (std::abs(pl.normal.dot(p3(q)) - pl.offset) <= tol) on_face.push_back(q);

    // Local frame (e1, e2, normal) is right-handed, so counter-clockwise in
    // the frame means outward orientation.
    Eigen::Vector3d e1 = pl.normal.unitOrthogonal();
    Eigen::Vector3d e2 = pl.normal.cross(e1);
    std::vector<Eigen::Vector2d> local;
    for (size_t q : on_face) local.emplace_back(e1.dot(p3(q)), e2.dot(p3(q)));
    std::vector<int> ring = planar_hull(local, tol);
    for (size_t r = 1; r + 1 < ring.size(); ++r) {
      h.faces.push_back({intern(on_face[static_cast<size_t>(ring[0])]),
                         intern(on_face[static_cast<size_t>(ring[r])]),
                         intern(on_face[static_cast<size_t>(ring[r + 1])])});
    }
  }
  return h;
}

}  // namespace

int affine_rank(std::span<const Vec> points) {
  if (points.size() < 2) return 0;
  const Index n = points[0].size();
  Mat centered(n, static_cast<Index>(points.size()) - 1);
  for (size_t i = 1; i < points.size(); ++i) centered.col(static_cast<Index>(i) - 1) = points[i] - points[0];
  Eigen::JacobiSVD<Mat> svd(centered);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * s[0]) ++rank;
  return rank;
}

std::vector<int> planar_hull(std::span<const Eigen::Vector2d> points, double tol) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = points[static_cast<size_t>(a)];
    const auto& pb = points[static_cast<size_t>(b)];
    return pa.x() < pb.x() || (pa.x() == pb.x() && pa.y() < pb.y());
  });
  auto at = [&](int i) -> const Eigen::Vector2d& { return points[static_cast<size_t>(i)]; };
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const size_t base = hull.size();
    for (int i : order) {
      while (hull.size() >= base + 2 && cross2(at(hull[hull.size() - 2]), at(hull.back()), at(i)) <= tol)
        hull.pop_back();
      hull.push_back(i);
    }
    hull.pop_back();
    std::reverse(order.begin(), order.end());
  }
  return hull;
}

Hull convex_hull(std::span<const Vec> points) {
  const int n = static_cast<int>(points[0].size());
  const double tol = 1e-10 * scale_of(points);
  switch (n) {
    case 1:
      return hull_1d(points);
    case 2:
      return hull_2d(points, tol);
    default:
      return hull_3d(points, tol);
  }
}

}  // namespace dcsplit::detail
