#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcsplit/dc_decompose.h"
#include "dcsplit/field.h"
#include "dcsplit/mesh.h"
#include "dcsplit/pl_function.h"
#include "dcsplit/types.h"

namespace dcsplit {

/// Coordinate plane spanned by two axes.
struct ProjectionPlane {
  int axis_a = 0;
  int axis_b = 1;
};

/// Arc-length parametrized polyline. Closed curves repeat the first point
/// at the end.
struct Curve {
  Mat points;     // n x (m+1)
  Vec arclength;  // t_0 = 0 < ... < t_m = T_r
  bool closed = false;
  std::optional<ProjectionPlane> plane;

  int dimension() const { return static_cast<int>(points.rows()); }
  Index segment_count() const { return points.cols() - 1; }
  double length() const { return arclength[arclength.size() - 1]; }
  Vec direction(Index j) const { return (points.col(j + 1) - points.col(j)).normalized(); }
};

/// Drops consecutive duplicates and closes the loop when `closed`.
/// Throws DegenerateCurve for fewer than two distinct points.
Curve arclength_parametrize(std::span<const Vec> points, bool closed);
Curve arclength_parametrize(const Mat& points, bool closed);

enum class FamilyKind { kEllipses, kRandomConvex, kMixed };

FamilyKind family_kind_from_string(const std::string& s);
const char* to_string(FamilyKind k);

struct FamilySpec {
  FamilyKind kind = FamilyKind::kMixed;
  Index count = 16;
  std::uint64_t seed = 1;
  /// Bound on the angle between segments and the projection plane (n = 3).
  double angle_bound = std::numbers::pi / 4;
  /// Segments per ellipse.
  Index segments = 64;
  /// Points drawn for each random convex hull.
  Index hull_points = 12;
};

/// Closed convex curves inside the domain. In 1-D: open segments along the
/// interval (the first spans the whole domain). In 3-D: planar convex
/// curves on a coordinate plane lifted by a linear height whose slope keeps
/// every segment within angle_bound of the plane.
std::vector<Curve> generate_family(const Domain& domain, const FamilySpec& spec);

/// Lift a planar polygon (2 x m, not repeated) into R^3 over `plane`, with
/// height base + <slope, u - u0> where u0 is the polygon centroid.
Curve lift_polygon(const Mat& planar, const ProjectionPlane& plane, const Eigen::Vector2d& slope, double base);

struct ProjectionCheck {
  bool convex_position = false;
  /// Largest angle between a segment and the projection plane.
  double max_angle = 0.0;
};

ProjectionCheck check_projection(const Curve& curve);

/// Composite t -> f(r(t)) with piecewise-constant one-sided derivatives.
struct Trace {
  Vec breakpoints;  // s_0 = 0 < ... < s_q = T_r
  Mat positions;    // n x (q+1), r(s_j)
  Vec values;       // f(r(s_j))
  Vec derivatives;  // q entries, Phi' on (s_j, s_{j+1})
  Mat directions;   // n x q, unit r' on each interval
  bool closed = false;
  bool sampled = false;
  /// Sample step for sampled traces; 0 when exact.
  double step = 0.0;

  Index interval_count() const { return derivatives.size(); }
};

/// Exact trace of a PL function: breakpoints are polyline vertices and
/// facet crossings. Throws OutsideDomain.
Trace trace(const PLFunction& f, const Curve& curve);
/// Exact trace of a wedge sum: breakpoints are ridge crossings.
Trace trace(const ConvexSum& f, const Curve& curve);
/// Sampled trace: chord slopes over sub-intervals of length <= step.
Trace trace_sampled(const ScalarField& f, const Curve& curve, double step);

/// R(t) = (r(t), f(r(t))) in R^{n+1}.
struct LiftedCurve {
  Mat points;    // (n+1) x (q+1)
  Mat tangents;  // (n+1) x q, (r', Phi') per interval
  bool closed = false;
};

LiftedCurve lift(const Trace& trace);

/// sum |Phi'_{j+1} - Phi'_j|, wrap-around included for closed curves.
double derivative_variation(const Trace& trace);
/// sum |u_{j+1} - u_j| over unit segment directions, wrap-around included.
double tangent_variation(const Curve& curve);
/// sum |tau_{j+1}/|tau_{j+1}| - tau_j/|tau_j|| over lifted segments.
double turn(const LiftedCurve& lifted);

/// CSV rows of coordinates. A closed curve repeats its first row last.
void write_curve_csv(const Curve& curve, const std::string& path);
Curve read_curve_csv(const std::string& path);

}  // namespace dcsplit
