#include "dcsplit/pl_function.h"

#include <algorithm>

#include "dcsplit/parallel.h"

namespace dcsplit {

PLFunction::PLFunction(std::shared_ptr<const SimplicialMesh> mesh, Vec vertex_values)
    : mesh_(std::move(mesh)), vertex_values_(std::move(vertex_values)) {
  if (vertex_values_.size() != mesh_->vertex_count())
    throw Error("PLFunction: one value per mesh vertex required");
  const int n = mesh_->dimension();
  const auto& S = mesh_->simplices();
  gradients_.resize(n, S.cols());
  offsets_.resize(S.cols());
  Vec diffs(n);
  for (Index s = 0; s < S.cols(); ++s) {
    const double f0 = vertex_values_[S(0, s)];
    for (int i = 0; i < n; ++i) diffs[i] = vertex_values_[S(i + 1, s)] - f0;
    // Edge matrix E has columns x_i - x_0; the gradient solves E^T g = diffs.
    gradients_.col(s) = mesh_->inverse_edges(s).transpose() * diffs;
    offsets_[s] = f0 - gradients_.col(s).dot(mesh_->vertex(S(0, s)));
  }
}

double PLFunction::directional_derivative(const Vec& x, const Vec& d) const {
  return gradients_.col(mesh_->locate_directional(x, d)).dot(d);
}

std::vector<double> PLFunction::kinks(const Vec& p, const Vec& q) const {
  const SimplicialMesh& m = *mesh_;
  const int n = m.dimension();
  std::vector<double> out;
  for (Index s : m.candidates(p.cwiseMin(q), p.cwiseMax(q))) {
    Vec a = m.barycentric(s, p);
    Vec b = m.barycentric(s, q) - a;
    double lo = 0.0, hi = 1.0;
    bool empty = false;
    for (int i = 0; i <= n && !empty; ++i) {
      if (b[i] > 0.0) {
        lo = std::max(lo, -a[i] / b[i]);
      } else if (b[i] < 0.0) {
        hi = std::min(hi, -a[i] / b[i]);
      } else if (a[i] < -kContainmentTol) {
        empty = true;
      }
    }
    if (empty || hi - lo <= 1e-14) continue;
    if (lo > 0.0 && lo < 1.0) out.push_back(lo);
    if (hi > 0.0 && hi < 1.0) out.push_back(hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PLFunction PLFunction::operator+(const PLFunction& other) const {
  if (other.mesh_ != mesh_) throw Error("PLFunction sum requires a shared mesh");
  return PLFunction(mesh_, vertex_values_ + other.vertex_values_);
}

PLFunction PLFunction::operator-() const { return PLFunction(mesh_, -vertex_values_); }

PLFunction interpolate(const ScalarField& field, std::shared_ptr<const SimplicialMesh> mesh) {
  if (field.dimension() != mesh->dimension())
    throw EvaluationFailure("field dimension " + std::to_string(field.dimension()) +
                            " does not match mesh dimension " + std::to_string(mesh->dimension()));
  Vec values(mesh->vertex_count());
  parallel_for(mesh->vertex_count(), [&](Index v) { values[v] = field(mesh->vertex(v)); });
  return PLFunction(std::move(mesh), std::move(values));
}

std::vector<Hinge> hinges(const PLFunction& f, double rel_tol) {
  const SimplicialMesh& m = f.mesh();
  const int n = m.dimension();
  std::vector<Hinge> out;
  out.reserve(static_cast<size_t>(m.interior_facet_count()));
  const auto& facets = m.facets();
  for (size_t id = 0; id < facets.size(); ++id) {
    const Facet& facet = facets[id];
    if (!facet.interior()) continue;
    Hinge h;
    h.facet = static_cast<Index>(id);
    h.simplex_k = facet.first;
    h.simplex_l = facet.second;
    h.gradient_k = f.gradient(h.simplex_k);
    h.gradient_l = f.gradient(h.simplex_l);
    h.offset_k = f.offsets()[h.simplex_k];
    h.offset_l = f.offsets()[h.simplex_l];

    h.midpoint = Vec::Zero(n);
    for (int i = 0; i < n; ++i) h.midpoint += m.vertex(facet.vertices[static_cast<size_t>(i)]);
    h.midpoint /= n;

    if (n == 1) {
      h.normal = Vec::Ones(1);
    } else {
      Mat span(n, n - 1);
      const Vec base = m.vertex(facet.vertices[0]);
      for (int i = 1; i < n; ++i) span.col(i - 1) = m.vertex(facet.vertices[static_cast<size_t>(i)]) - base;
      Mat q = span.householderQr().householderQ();
      h.normal = q.col(n - 1);
    }
    if (h.normal.dot(m.centroid(h.simplex_l) - m.centroid(h.simplex_k)) < 0.0) h.normal = -h.normal;

    h.jump = (h.gradient_l - h.gradient_k).dot(h.normal);
    const double tol = rel_tol * (1.0 + h.gradient_k.norm() + h.gradient_l.norm());
    h.kind = h.jump > tol ? HingeKind::kConvex : h.jump < -tol ? HingeKind::kConcave : HingeKind::kFlat;
    out.push_back(std::move(h));
  }
  return out;
}

double lipschitz_estimate(const PLFunction& f) {
  return f.gradients().colwise().norm().maxCoeff();
}

}  // namespace dcsplit
