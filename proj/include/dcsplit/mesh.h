#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "dcsplit/rng.h"
#include "dcsplit/types.h"

namespace dcsplit {

/// Convex polytope D in R^n (n in {1,2,3}) given by its extreme points, a
/// half-space description, and an interior anchor point.
struct Domain {
  int dimension = 0;
  /// Extreme points. Counter-clockwise in 2-D, ascending in 1-D.
  std::vector<Vec> vertices;
  /// Boundary triangles of the hull (3-D only), as indices into `vertices`,
  /// oriented outward.
  std::vector<std::array<int, 3>> boundary_faces;
  /// Outward half-spaces: normals.row(i) * x <= offsets(i).
  Mat normals;
  Vec offsets;
  Vec anchor;
  bool axis_aligned_box = false;

  /// Largest signed violation of the half-space constraints (<= 0 inside).
  double max_violation(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-12) const { return max_violation(x) <= tol; }
  /// Distance from x to the boundary for interior points.
  double depth(const Vec& x) const { return -max_violation(x); }
  Vec lower() const;
  Vec upper() const;
  double diameter() const { return (upper() - lower()).norm(); }
};

/// Builds the convex hull of `points`. The anchor defaults to the centroid of
/// the hull vertices. Throws DegenerateDomain / AnchorOutside.
Domain build_domain(std::span<const Vec> points, std::optional<Vec> anchor = std::nullopt);
Domain box_domain(const Vec& lo, const Vec& hi, std::optional<Vec> anchor = std::nullopt);

/// Uniform sample from the interior of the domain (rejection from the box).
Vec sample_point(const Domain& domain, Rng& rng);

/// First `count` points of a Halton sequence that fall inside the domain.
/// Used as a fixed probe grid shared across refinement levels.
std::vector<Vec> probe_points(const Domain& domain, Index count);

struct Facet {
  /// Sorted vertex indices; the first n entries are used.
  std::array<int, 3> vertices{-1, -1, -1};
  int first = -1;
  /// -1 for boundary facets.
  int second = -1;
  bool interior() const { return second >= 0; }
};

/// Nested conforming simplicial partition of a Domain.
class SimplicialMesh {
 public:
  SimplicialMesh(const Domain& domain, int level, Mat vertices, Eigen::MatrixXi simplices);

  int dimension() const { return static_cast<int>(vertices_.rows()); }
  int level() const { return level_; }
  const Domain& domain() const { return domain_; }

  /// n x V coordinates.
  const Mat& vertices() const { return vertices_; }
  Vec vertex(Index i) const { return vertices_.col(i); }
  Index vertex_count() const { return vertices_.cols(); }

  /// (n+1) x S vertex indices.
  const Eigen::MatrixXi& simplices() const { return simplices_; }
  Index simplex_count() const { return simplices_.cols(); }

  const std::vector<Facet>& facets() const { return facets_; }
  Index interior_facet_count() const;

  /// Inverse of the edge matrix [x1-x0, ..., xn-x0] of simplex s.
  const Mat& inverse_edges(Index s) const { return inverse_edges_[static_cast<size_t>(s)]; }

  /// Barycentric coordinates (n+1) of x with respect to simplex s.
  Vec barycentric(Index s, const Vec& x) const;
  Vec centroid(Index s) const;
  double diameter(Index s) const;
  double max_diameter() const;
  double min_diameter() const;
  /// Max over simplices of circumradius / inradius.
  double shape_bound() const { return shape_bound_; }

  /// Lowest-index simplex containing x; throws OutsideDomain.
  Index locate(const Vec& x) const;
  /// Lowest-index simplex containing x + eps*d for all small eps > 0.
  Index locate_directional(const Vec& x, const Vec& d) const;
  /// Simplices whose bounding boxes meet the box [lo, hi], ascending.
  std::vector<Index> candidates(const Vec& lo, const Vec& hi) const;

 private:
  void build_facets();
  void build_geometry();
  void build_buckets();
  Index bucket_of(const Vec& x) const;
  std::array<Index, 3> cell_coords(const Vec& x) const;

  Domain domain_;
  int level_;
  Mat vertices_;
  Eigen::MatrixXi simplices_;
  std::vector<Facet> facets_;
  std::vector<Mat> inverse_edges_;
  double shape_bound_ = 0.0;

  Vec grid_lo_;
  Vec grid_cell_;
  std::array<Index, 3> grid_dims_{1, 1, 1};
  std::vector<std::vector<Index>> buckets_;
};

/// Level-0 partition refined `level` times.
SimplicialMesh triangulate(const Domain& domain, int level);

/// Uniform edge-midpoint refinement: bisection (1-D), red refinement
/// (2-D), Bey's red refinement (3-D).
SimplicialMesh refine(const SimplicialMesh& mesh);

}  // namespace dcsplit
