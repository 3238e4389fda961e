#include "dcsplit/curves.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hull.h"

namespace dcsplit {

namespace {

constexpr double kPi = std::numbers::pi;

int third_axis(const ProjectionPlane& plane) { return 3 - plane.axis_a - plane.axis_b; }

// Largest R such that center + R * w stays in the domain for every w.
double max_scale(const Domain& domain, const Vec& center, const std::vector<Vec>& dirs) {
  double r = std::numeric_limits<double>::infinity();
  const Vec slack = domain.offsets - domain.normals * center;
  for (const Vec& w : dirs) {
    const Vec rate = domain.normals * w;
    for (Index i = 0; i < rate.size(); ++i)
      if (rate[i] > 0.0) r = std::min(r, slack[i] / rate[i]);
  }
  return r;
}

Mat planar_ellipse(const Domain& domain, Rng& rng, Index segments) {
  const Vec center = sample_point(domain, rng);
  const double ratio = rng.uniform(0.3, 1.0);
  const double tilt = rng.uniform(0.0, kPi);
  const double phase = rng.uniform(0.0, 2.0 * kPi / static_cast<double>(segments));
  const Eigen::Rotation2Dd rot(tilt);
  std::vector<Vec> dirs;
  for (Index k = 0; k < segments; ++k) {
    const double a = phase + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(segments);
    Eigen::Vector2d w = rot * Eigen::Vector2d(std::cos(a), ratio * std::sin(a));
    dirs.push_back(w);
  }
  const double scale = max_scale(domain, center, dirs) * rng.uniform(0.3, 0.95);
  Mat out(2, segments);
  for (Index k = 0; k < segments; ++k) out.col(k) = center + scale * dirs[static_cast<size_t>(k)];
  return out;
}

Mat planar_random_convex(const Domain& domain, Rng& rng, Index hull_points) {
  for (;;) {
    std::vector<Eigen::Vector2d> pts;
    for (Index i = 0; i < std::max<Index>(hull_points, 3); ++i) {
      Vec p = sample_point(domain, rng);
      pts.emplace_back(p[0], p[1]);
    }
    std::vector<int> ring = detail::planar_hull(pts, 1e-12);
    if (ring.size() < 3) continue;
    Mat out(2, static_cast<Index>(ring.size()));
    for (size_t i = 0; i < ring.size(); ++i) out.col(static_cast<Index>(i)) = pts[static_cast<size_t>(ring[i])];
    return out;
  }
}

Mat planar_curve(const Domain& domain2, Rng& rng, FamilyKind kind, Index index, const FamilySpec& spec) {
  const bool ellipse = kind == FamilyKind::kEllipses || (kind == FamilyKind::kMixed && index % 2 == 0);
  return ellipse ? planar_ellipse(domain2, rng, spec.segments) : planar_random_convex(domain2, rng, spec.hull_points);
}

Curve closed_curve(const Mat& ring) {
  Mat pts(ring.rows(), ring.cols() + 1);
  pts.leftCols(ring.cols()) = ring;
  pts.col(ring.cols()) = ring.col(0);
  return arclength_parametrize(pts, true);
}

Curve lifted_family_member(const Domain& domain, Rng& rng, Index index, const FamilySpec& spec) {
  static constexpr ProjectionPlane kPlanes[3] = {{0, 1}, {0, 2}, {1, 2}};
  const ProjectionPlane plane = kPlanes[rng.below(3)];
  const int c = third_axis(plane);

  std::vector<Vec> projected;
  for (const Vec& v : domain.vertices) projected.push_back(Eigen::Vector2d(v[plane.axis_a], v[plane.axis_b]));
  const Domain shadow = build_domain(projected);

  Mat ring = planar_curve(shadow, rng, spec.kind, index, spec);
  const Eigen::Vector2d center = ring.rowwise().mean();

  // Height range over the ring centroid.
  double zlo = -std::numeric_limits<double>::infinity(), zhi = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < domain.normals.rows(); ++i) {
    const double rest =
        domain.offsets[i] - domain.normals(i, plane.axis_a) * center[0] - domain.normals(i, plane.axis_b) * center[1];
    const double nz = domain.normals(i, c);
    if (nz > 1e-14) zhi = std::min(zhi, rest / nz);
    if (nz < -1e-14) zlo = std::max(zlo, rest / nz);
  }
  const double base = 0.5 * (zlo + zhi);
  const double heading = rng.uniform(0.0, 2.0 * kPi);
  const double max_slope = std::tan(spec.angle_bound);
  Eigen::Vector2d slope = max_slope * rng.uniform(0.2, 0.9) * Eigen::Vector2d(std::cos(heading), std::sin(heading));

  for (int attempt = 0; attempt < 200; ++attempt) {
    Curve curve = lift_polygon(ring, plane, slope, base);
    bool inside = true;
    for (Index j = 0; j < curve.points.cols() && inside; ++j) inside = domain.contains(curve.points.col(j), 0.0);
    if (inside) return curve;
    ring = (ring.colwise() - center) * 0.85;
    ring.colwise() += center;
    slope *= 0.85;
  }
  throw Error("could not fit a lifted curve inside the domain");
}

template <typename Field>
Trace exact_trace(const Field& f, const Curve& curve) {
  struct Break {
    double t;
    Vec point;
    Index segment;
    bool vertex;
  };
  const double total = curve.length();
  const double tol = 1e-12 * total;
  std::vector<Break> breaks;
  auto push = [&](Break b) {
    if (!breaks.empty() && b.t - breaks.back().t <= tol) {
      if (b.vertex && !breaks.back().vertex) breaks.back() = std::move(b);
      return;
    }
    breaks.push_back(std::move(b));
  };

  const Index m = curve.segment_count();
  for (Index j = 0; j < m; ++j) {
    const Vec p = curve.points.col(j), q = curve.points.col(j + 1);
    const double t0 = curve.arclength[j], len = curve.arclength[j + 1] - t0;
    push({t0, p, j, true});
    for (double s : f.kinks(p, q)) push({t0 + s * len, p + s * (q - p), j, false});
  }
  // Final vertex closes the last interval and always wins over a crossing.
  if (!breaks.empty() && total - breaks.back().t <= tol) breaks.pop_back();
  breaks.push_back({total, curve.points.col(m), m - 1, true});

  const Index q = static_cast<Index>(breaks.size()) - 1;
  const int n = curve.dimension();
  Trace tr;
  tr.closed = curve.closed;
  tr.breakpoints.resize(q + 1);
  tr.positions.resize(n, q + 1);
  tr.values.resize(q + 1);
  tr.derivatives.resize(q);
  tr.directions.resize(n, q);
  for (Index j = 0; j <= q; ++j) {
    const Break& b = breaks[static_cast<size_t>(j)];
    tr.breakpoints[j] = b.t;
    tr.positions.col(j) = b.point;
    tr.values[j] = f.value(b.point);
  }
  for (Index j = 0; j < q; ++j) {
    const Vec u = curve.direction(breaks[static_cast<size_t>(j)].segment);
    const Vec mid = 0.5 * (tr.positions.col(j) + tr.positions.col(j + 1));
    tr.directions.col(j) = u;
    tr.derivatives[j] = f.directional_derivative(mid, u);
  }
  return tr;
}

double wrapped_sum(const Mat& unit_columns, bool closed) {
  const Index q = unit_columns.cols();
  double total = 0.0;
  for (Index j = 0; j + 1 < q; ++j) total += (unit_columns.col(j + 1) - unit_columns.col(j)).norm();
  if (closed && q > 1) total += (unit_columns.col(0) - unit_columns.col(q - 1)).norm();
  return total;
}

}  // namespace

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "ellipses") return FamilyKind::kEllipses;
  if (s == "random_convex") return FamilyKind::kRandomConvex;
  if (s == "mixed") return FamilyKind::kMixed;
  throw ConfigError("family kind must be ellipses, random_convex or mixed (got '" + s + "')");
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::kEllipses:
      return "ellipses";
    case FamilyKind::kRandomConvex:
      return "random_convex";
    case FamilyKind::kMixed:
      return "mixed";
  }
  return "mixed";
}

Curve arclength_parametrize(std::span<const Vec> points, bool closed) {
  if (points.empty()) throw DegenerateCurve("curve has no points");
  double scale = 1.0;
  for (const Vec& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double tol = 1e-14 * scale;

  std::vector<Vec> kept;
  for (const Vec& p : points)
    if (kept.empty() || (p - kept.back()).norm() > tol) kept.push_back(p);
  if (closed) {
    while (kept.size() > 1 && (kept.back() - kept.front()).norm() <= tol) kept.pop_back();
    if (kept.size() >= 2) kept.push_back(kept.front());
  }
  if (kept.size() < 2) throw DegenerateCurve("curve needs at least two distinct points");

  Curve c;
  c.closed = closed;
  c.points.resize(kept.front().size(), static_cast<Index>(kept.size()));
  c.arclength.resize(static_cast<Index>(kept.size()));
  c.arclength[0] = 0.0;
  for (size_t i = 0; i < kept.size(); ++i) {
    c.points.col(static_cast<Index>(i)) = kept[i];
    if (i > 0) c.arclength[static_cast<Index>(i)] = c.arclength[static_cast<Index>(i) - 1] + (kept[i] - kept[i - 1]).norm();
  }
  if (!(c.length() > 0.0)) throw DegenerateCurve("curve has zero length");
  return c;
}

Curve arclength_parametrize(const Mat& points, bool closed) {
  std::vector<Vec> cols;
  for (Index j = 0; j < points.cols(); ++j) cols.push_back(points.col(j));
  return arclength_parametrize(cols, closed);
}

std::vector<Curve> generate_family(const Domain& domain, const FamilySpec& spec) {
  if (spec.count < 1) throw ConfigError("curve family needs count >= 1");
  if (!(spec.angle_bound > 0.0 && spec.angle_bound < kPi / 2))
    throw ConfigError("angle bound must lie in (0, pi/2)");
  Rng rng(spec.seed);
  std::vector<Curve> family;
  const int n = domain.dimension;
  for (Index i = 0; i < spec.count; ++i) {
    if (n == 1) {
      const double lo = domain.vertices.front()[0], hi = domain.vertices.back()[0];
      double a = lo, b = hi;
      if (i > 0) {
        do {
          a = rng.uniform(lo, hi);
          b = rng.uniform(lo, hi);
          if (a > b) std::swap(a, b);
        } while (b - a < 0.1 * (hi - lo));
      }
      Mat pts(1, 3);
      pts << a, 0.5 * (a + b), b;
      family.push_back(arclength_parametrize(pts, false));
    } else if (n == 2) {
      Curve c = closed_curve(planar_curve(domain, rng, spec.kind, i, spec));
      c.plane = ProjectionPlane{0, 1};
      family.push_back(std::move(c));
    } else {
      family.push_back(lifted_family_member(domain, rng, i, spec));
    }
  }
  return family;
}

Curve lift_polygon(const Mat& planar, const ProjectionPlane& plane, const Eigen::Vector2d& slope, double base) {
  const Eigen::Vector2d center = planar.rowwise().mean();
  Mat pts(3, planar.cols());
  for (Index j = 0; j < planar.cols(); ++j) {
    pts(plane.axis_a, j) = planar(0, j);
    pts(plane.axis_b, j) = planar(1, j);
    pts(third_axis(plane), j) = base + slope.dot(Eigen::Vector2d(planar.col(j)) - center);
  }
  Curve c = closed_curve(pts);
  c.plane = plane;
  return c;
}

ProjectionCheck check_projection(const Curve& curve) {
  const ProjectionPlane plane = curve.plane.value_or(ProjectionPlane{0, 1});
  const Index m = curve.closed ? curve.segment_count() : curve.points.cols();
  ProjectionCheck out;
  std::vector<Eigen::Vector2d> ring;
  for (Index j = 0; j < m; ++j) ring.emplace_back(curve.points(plane.axis_a, j), curve.points(plane.axis_b, j));

  if (curve.dimension() >= 2 && curve.closed && m >= 3) {
    const bool all_on_hull = detail::planar_hull(ring, 1e-12).size() == ring.size();
    double winding = 0.0;
    int sign = 0;
    bool same_sign = true;
    for (Index j = 0; j < m; ++j) {
      const Eigen::Vector2d a = ring[static_cast<size_t>((j + 1) % m)] - ring[static_cast<size_t>(j)];
      const Eigen::Vector2d b = ring[static_cast<size_t>((j + 2) % m)] - ring[static_cast<size_t>((j + 1) % m)];
      const double cross = a.x() * b.y() - a.y() * b.x();
      const int s = cross > 0 ? 1 : cross < 0 ? -1 : 0;
      if (s != 0) {
        if (sign == 0) sign = s;
        same_sign &= s == sign;
      }
      winding += std::atan2(cross, a.dot(b));
    }
    out.convex_position = all_on_hull && same_sign && std::abs(std::abs(winding) - 2.0 * kPi) < 1e-6;
  }
  if (curve.dimension() == 3) {
    const int c = third_axis(plane);
    for (Index j = 0; j < curve.segment_count(); ++j) {
      const Vec d = curve.points.col(j + 1) - curve.points.col(j);
      const double flat = std::hypot(d[plane.axis_a], d[plane.axis_b]);
      out.max_angle = std::max(out.max_angle, std::atan2(std::abs(d[c]), flat));
    }
  }
  return out;
}

Trace trace(const PLFunction& f, const Curve& curve) {
  if (curve.dimension() != f.dimension()) throw OutsideDomain("curve dimension does not match the field");
  return exact_trace(f, curve);
}

Trace trace(const ConvexSum& f, const Curve& curve) {
  if (curve.dimension() != f.dimension()) throw OutsideDomain("curve dimension does not match the field");
  return exact_trace(f, curve);
}

Trace trace_sampled(const ScalarField& f, const Curve& curve, double step) {
  if (!(step > 0.0)) throw ConfigError("sample step must be positive");
  const int n = curve.dimension();
  std::vector<double> ts;
  std::vector<Vec> pts;
  std::vector<Index> seg;
  for (Index j = 0; j < curve.segment_count(); ++j) {
    const Vec p = curve.points.col(j), q = curve.points.col(j + 1);
    const double t0 = curve.arclength[j], len = curve.arclength[j + 1] - t0;
    const Index pieces = std::max<Index>(1, static_cast<Index>(std::ceil(len / step)));
    for (Index k = 0; k < pieces; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(pieces);
      ts.push_back(t0 + s * len);
      pts.push_back(p + s * (q - p));
      seg.push_back(j);
    }
  }
  ts.push_back(curve.length());
  pts.push_back(curve.points.col(curve.segment_count()));

  const Index q = static_cast<Index>(ts.size()) - 1;
  Trace tr;
  tr.closed = curve.closed;
  tr.sampled = true;
  tr.step = step;
  tr.breakpoints = Eigen::Map<const Vec>(ts.data(), q + 1);
  tr.positions.resize(n, q + 1);
  tr.values.resize(q + 1);
  for (Index j = 0; j <= q; ++j) {
    tr.positions.col(j) = pts[static_cast<size_t>(j)];
    tr.values[j] = f(pts[static_cast<size_t>(j)]);
  }
  tr.derivatives.resize(q);
  tr.directions.resize(n, q);
  for (Index j = 0; j < q; ++j) {
    tr.derivatives[j] = (tr.values[j + 1] - tr.values[j]) / (tr.breakpoints[j + 1] - tr.breakpoints[j]);
    tr.directions.col(j) = curve.direction(seg[static_cast<size_t>(j)]);
  }
  return tr;
}

LiftedCurve lift(const Trace& trace) {
  const Index n = trace.positions.rows();
  LiftedCurve out;
  out.closed = trace.closed;
  out.points.resize(n + 1, trace.positions.cols());
  out.points.topRows(n) = trace.positions;
  out.points.row(n) = trace.values.transpose();
  out.tangents.resize(n + 1, trace.interval_count());
  out.tangents.topRows(n) = trace.directions;
  out.tangents.row(n) = trace.derivatives.transpose();
  return out;
}

double derivative_variation(const Trace& trace) {
  const Index q = trace.interval_count();
  double total = 0.0;
  for (Index j = 0; j + 1 < q; ++j) total += std::abs(trace.derivatives[j + 1] - trace.derivatives[j]);
  if (trace.closed && q > 1) total += std::abs(trace.derivatives[0] - trace.derivatives[q - 1]);
  return total;
}

double tangent_variation(const Curve& curve) {
  Mat dirs(curve.dimension(), curve.segment_count());
  for (Index j = 0; j < curve.segment_count(); ++j) dirs.col(j) = curve.direction(j);
  return wrapped_sum(dirs, curve.closed);
}

double turn(const LiftedCurve& lifted) {
  return wrapped_sum(lifted.tangents.colwise().normalized(), lifted.closed);
}

void write_curve_csv(const Curve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write curve to '" + path + "'");
  char buf[64];
  for (Index j = 0; j < curve.points.cols(); ++j) {
    for (Index a = 0; a < curve.points.rows(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", curve.points(a, j));
      out << (a ? "," : "") << buf;
    }
    out << '\n';
  }
}

Curve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read curve from '" + path + "'");
  std::vector<Vec> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    try {
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    } catch (const std::exception&) {
      if (pts.empty()) continue;  // header
      throw ConfigError("curve CSV: non-numeric row '" + line + "'");
    }
    pts.push_back(Eigen::Map<const Vec>(row.data(), static_cast<Index>(row.size())));
  }
  const bool closed = pts.size() > 2 && pts.front() == pts.back();
  return arclength_parametrize(pts, closed);
}

}  // namespace dcsplit
