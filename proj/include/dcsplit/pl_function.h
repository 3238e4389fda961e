#pragma once

#include <memory>
#include <vector>

#include "dcsplit/field.h"
#include "dcsplit/mesh.h"
#include "dcsplit/types.h"

namespace dcsplit {

/// Continuous piecewise-linear function on a simplicial mesh: one affine
/// piece x -> <g_s, x> + b_s per simplex, matching the vertex values.
class PLFunction {
 public:
  PLFunction(std::shared_ptr<const SimplicialMesh> mesh, Vec vertex_values);

  const SimplicialMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const SimplicialMesh>& mesh_ptr() const { return mesh_; }
  int dimension() const { return mesh_->dimension(); }

  const Vec& vertex_values() const { return vertex_values_; }
  /// n x S, column s is the gradient on simplex s.
  const Mat& gradients() const { return gradients_; }
  Vec gradient(Index s) const { return gradients_.col(s); }
  const Vec& offsets() const { return offsets_; }

  double value(const Vec& x) const { return value_on(mesh_->locate(x), x); }
  double value_on(Index simplex, const Vec& x) const { return gradients_.col(simplex).dot(x) + offsets_[simplex]; }

  /// One-sided derivative lim_{e->0+} (f(x + e d) - f(x)) / e.
  double directional_derivative(const Vec& x, const Vec& d) const;

  /// Parameters s in (0,1) where p + s (q - p) crosses a simplex boundary.
  std::vector<double> kinks(const Vec& p, const Vec& q) const;

  PLFunction operator+(const PLFunction& other) const;
  PLFunction operator-() const;

 private:
  std::shared_ptr<const SimplicialMesh> mesh_;
  Vec vertex_values_;
  Mat gradients_;
  Vec offsets_;
};

PLFunction interpolate(const ScalarField& field, std::shared_ptr<const SimplicialMesh> mesh);
inline PLFunction interpolate(const ScalarField& field, const SimplicialMesh& mesh) {
  return interpolate(field, std::make_shared<const SimplicialMesh>(mesh));
}

inline double evaluate(const PLFunction& f, const Vec& x) { return f.value(x); }

enum class HingeKind { kConvex, kConcave, kFlat };

inline const char* to_string(HingeKind k) {
  switch (k) {
    case HingeKind::kConvex:
      return "convex";
    case HingeKind::kConcave:
      return "concave";
    case HingeKind::kFlat:
      return "flat";
  }
  return "flat";
}

/// Dihedral angle between the affine pieces of two simplices sharing an
/// interior facet.
struct Hinge {
  Index facet = 0;
  Index simplex_k = 0;
  Index simplex_l = 0;
  Vec gradient_k;
  Vec gradient_l;
  double offset_k = 0.0;
  double offset_l = 0.0;
  /// Unit facet normal pointing from simplex k into simplex l.
  Vec normal;
  /// Facet centroid.
  Vec midpoint;
  /// <g_l - g_k, normal>; positive for a convex fold.
  double jump = 0.0;
  HingeKind kind = HingeKind::kFlat;
};

/// Relative tolerance for calling a hinge flat: |jump| <= tol (1 + |g_k| + |g_l|).
inline constexpr double kHingeTol = 1e-9;

/// One hinge per interior facet, ordered by facet id.
std::vector<Hinge> hinges(const PLFunction& f, double rel_tol = kHingeTol);

/// max_s |g_s|, the Lipschitz constant of the interpolant.
double lipschitz_estimate(const PLFunction& f);

}  // namespace dcsplit
