#include "dcsplit/mesh.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hull.h"

namespace dcsplit {

namespace {

double radical_inverse(Index i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

bool is_axis_aligned_box(const std::vector<Vec>& vertices, const Vec& lo, const Vec& hi) {
  const Index n = lo.size();
  if (vertices.size() != (size_t{1} << n)) return false;
  const double tol = 1e-12 * std::max(1.0, (hi - lo).norm());
  for (const auto& v : vertices)
    for (Index i = 0; i < n; ++i)
      if (std::abs(v[i] - lo[i]) > tol && std::abs(v[i] - hi[i]) > tol) return false;
  return true;
}

double simplex_shape_ratio(const Mat& pts) {
  const Index n = pts.rows();
  if (n == 1) return 1.0;
  if (n == 2) {
    double a = (pts.col(1) - pts.col(0)).norm();
    double b = (pts.col(2) - pts.col(1)).norm();
    double c = (pts.col(0) - pts.col(2)).norm();
    Vec e1 = pts.col(1) - pts.col(0), e2 = pts.col(2) - pts.col(0);
    double area = 0.5 * std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
    double circum = a * b * c / (4.0 * area);
    double in = area / (0.5 * (a + b + c));
    return circum / in;
  }
  Mat edges(3, 3);
  for (Index i = 0; i < 3; ++i) edges.col(i) = pts.col(i + 1) - pts.col(0);
  Vec rhs = edges.colwise().squaredNorm().transpose();
  Vec center = (2.0 * edges.transpose()).partialPivLu().solve(rhs);
  double volume = std::abs(edges.determinant()) / 6.0;
  double face_area = 0.0;
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Eigen::Vector3d, 3> f;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != skip) f[static_cast<size_t>(k++)] = pts.col(i);
    face_area += 0.5 * (f[1] - f[0]).cross(f[2] - f[0]).norm();
  }
  return center.norm() / (3.0 * volume / face_area);
}

using EdgeKey = std::pair<int, int>;

int midpoint_index(std::map<EdgeKey, int>& midpoints, std::vector<Vec>& added, const Mat& vertices,
                   int a, int b) {
  EdgeKey key{std::min(a, b), std::max(a, b)};
  auto it = midpoints.find(key);
  if (it != midpoints.end()) return it->second;
  int idx = static_cast<int>(vertices.cols() + static_cast<Index>(added.size()));
  added.push_back(0.5 * (vertices.col(a) + vertices.col(b)));
  midpoints.emplace(key, idx);
  return idx;
}

SimplicialMesh base_mesh(const Domain& domain) {
  const int n = domain.dimension;
  Mat verts;
  Eigen::MatrixXi simp;
  if (n == 1) {
    double lo = domain.vertices.front()[0], hi = domain.vertices.back()[0];
    verts = Mat(1, 3);
    verts << lo, 0.5 * (lo + hi), hi;
    simp = Eigen::MatrixXi(2, 2);
    simp << 0, 1, 1, 2;
  } else if (n == 2) {
    const Index m = static_cast<Index>(domain.vertices.size());
    verts = Mat(2, m);
    for (Index i = 0; i < m; ++i) verts.col(i) = domain.vertices[static_cast<size_t>(i)];
    if (domain.axis_aligned_box) {
      // Anti-diagonal split; the triangle at the lower corner comes first.
      simp = Eigen::MatrixXi(3, 2);
      simp.col(0) << 0, 1, 3;
      simp.col(1) << 1, 2, 3;
    } else {
      simp = Eigen::MatrixXi(3, m - 2);
      for (Index i = 1; i + 1 < m; ++i) simp.col(i - 1) << 0, static_cast<int>(i), static_cast<int>(i + 1);
    }
  } else if (domain.axis_aligned_box) {
    // Kuhn subdivision: one tetrahedron per axis permutation, each a
    // monotone lattice path from the low corner to the high corner.
    Vec lo = domain.lower(), hi = domain.upper();
    verts = Mat(3, 8);
    for (int c = 0; c < 8; ++c)
      for (int axis = 0; axis < 3; ++axis) verts(axis, c) = (c >> axis) & 1 ? hi[axis] : lo[axis];
    std::array<int, 3> perm{0, 1, 2};
    simp = Eigen::MatrixXi(4, 6);
    int t = 0;
    do {
      int corner = 0;
      simp(0, t) = corner;
      for (int k = 0; k < 3; ++k) {
        corner |= 1 << perm[static_cast<size_t>(k)];
        simp(k + 1, t) = corner;
      }
      ++t;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Cone from the anchor over the triangulated boundary.
    const Index m = static_cast<Index>(domain.vertices.size());
    verts = Mat(3, m + 1);
    for (Index i = 0; i < m; ++i) verts.col(i) = domain.vertices[static_cast<size_t>(i)];
    verts.col(m) = domain.anchor;
    simp = Eigen::MatrixXi(4, static_cast<Index>(domain.boundary_faces.size()));
    for (size_t f = 0; f < domain.boundary_faces.size(); ++f) {
      const auto& face = domain.boundary_faces[f];
      simp.col(static_cast<Index>(f)) << static_cast<int>(m), face[0], face[1], face[2];
    }
  }
  return SimplicialMesh(domain, 0, std::move(verts), std::move(simp));
}

}  // namespace

double Domain::max_violation(const Vec& x) const {
  return (normals * x - offsets).maxCoeff();
}

Vec Domain::lower() const {
  Vec lo = vertices.front();
  for (const auto& v : vertices) lo = lo.cwiseMin(v);
  return lo;
}

Vec Domain::upper() const {
  Vec hi = vertices.front();
  for (const auto& v : vertices) hi = hi.cwiseMax(v);
  return hi;
}

Domain build_domain(std::span<const Vec> points, std::optional<Vec> anchor) {
  if (points.empty()) throw DegenerateDomain("domain needs at least one point");
  const Index n = points[0].size();
  if (n < 1 || n > 3) throw DegenerateDomain("domain dimension must be 1, 2 or 3");
  for (const auto& p : points) {
    if (p.size() != n) throw DegenerateDomain("domain points have mixed dimensions");
    if (!p.allFinite()) throw DegenerateDomain("domain points must be finite");
  }
  if (static_cast<Index>(points.size()) < n + 1 || detail::affine_rank(points) < n)
    throw DegenerateDomain("domain points are affinely dependent (need " + std::to_string(n + 1) +
                           " affinely independent points)");

  detail::Hull hull = detail::convex_hull(points);
  Domain d;
  d.dimension = static_cast<int>(n);
  d.vertices = std::move(hull.vertices);
  d.boundary_faces = std::move(hull.faces);
  d.normals = std::move(hull.normals);
  d.offsets = std::move(hull.offsets);
  d.axis_aligned_box = is_axis_aligned_box(d.vertices, d.lower(), d.upper());

  if (anchor) {
    if (anchor->size() != n) throw AnchorOutside("anchor dimension does not match the domain");
    d.anchor = *anchor;
  } else {
    d.anchor = Vec::Zero(n);
    for (const auto& v : d.vertices) d.anchor += v;
    d.anchor /= static_cast<double>(d.vertices.size());
  }
  if (!(d.depth(d.anchor) > 1e-12 * std::max(1.0, d.diameter())))
    throw AnchorOutside("anchor is not strictly inside the domain");
  return d;
}

Domain box_domain(const Vec& lo, const Vec& hi, std::optional<Vec> anchor) {
  const Index n = lo.size();
  std::vector<Vec> corners;
  for (int c = 0; c < (1 << n); ++c) {
    Vec p(n);
    for (Index axis = 0; axis < n; ++axis) p[axis] = (c >> axis) & 1 ? hi[axis] : lo[axis];
    corners.push_back(p);
  }
  return build_domain(corners, std::move(anchor));
}

Vec sample_point(const Domain& domain, Rng& rng) {
  const Vec lo = domain.lower(), hi = domain.upper();
  for (;;) {
    Vec x = rng.uniform_in_box(lo, hi);
    if (domain.contains(x, 0.0)) return x;
  }
}

std::vector<Vec> probe_points(const Domain& domain, Index count) {
  static constexpr int kBases[3] = {2, 3, 5};
  const Vec lo = domain.lower(), hi = domain.upper();
  std::vector<Vec> out;
  for (Index i = 1; static_cast<Index>(out.size()) < count && i < 1000 * count + 1000; ++i) {
    Vec x(lo.size());
    for (Index a = 0; a < lo.size(); ++a) x[a] = lo[a] + radical_inverse(i, kBases[a]) * (hi[a] - lo[a]);
    if (domain.contains(x, 0.0)) out.push_back(std::move(x));
  }
  return out;
}

SimplicialMesh::SimplicialMesh(const Domain& domain, int level, Mat vertices, Eigen::MatrixXi simplices)
    : domain_(domain), level_(level), vertices_(std::move(vertices)), simplices_(std::move(simplices)) {
  build_facets();
  build_geometry();
  build_buckets();
}

void SimplicialMesh::build_facets() {
  const int n = dimension();
  std::map<std::array<int, 3>, int> index;
  for (Index s = 0; s < simplex_count(); ++s) {
    for (int skip = 0; skip <= n; ++skip) {
      std::array<int, 3> key{-1, -1, -1};
      int k = 0;
      for (int i = 0; i <= n; ++i)
        if (i != skip) key[static_cast<size_t>(k++)] = simplices_(i, s);
      std::sort(key.begin(), key.begin() + n);
      auto [it, inserted] = index.emplace(key, static_cast<int>(facets_.size()));
      if (inserted) {
        Facet f;
        f.vertices = key;
        f.first = static_cast<int>(s);
        facets_.push_back(f);
      } else {
        facets_[static_cast<size_t>(it->second)].second = static_cast<int>(s);
      }
    }
  }
}

void SimplicialMesh::build_geometry() {
  const int n = dimension();
  inverse_edges_.resize(static_cast<size_t>(simplex_count()));
  shape_bound_ = 0.0;
  Mat pts(n, n + 1);
  for (Index s = 0; s < simplex_count(); ++s) {
    for (int i = 0; i <= n; ++i) pts.col(i) = vertices_.col(simplices_(i, s));
    Mat edges(n, n);
    for (int i = 0; i < n; ++i) edges.col(i) = pts.col(i + 1) - pts.col(0);
    inverse_edges_[static_cast<size_t>(s)] = edges.inverse();
    shape_bound_ = std::max(shape_bound_, simplex_shape_ratio(pts));
  }
}

void SimplicialMesh::build_buckets() {
  const int n = dimension();
  grid_lo_ = vertices_.rowwise().minCoeff();
  Vec hi = vertices_.rowwise().maxCoeff();
  const double per_axis = std::pow(static_cast<double>(simplex_count()), 1.0 / n);
  const Index cells = std::clamp<Index>(static_cast<Index>(std::ceil(per_axis)), 1, 512);
  grid_cell_ = (hi - grid_lo_) / static_cast<double>(cells);
  for (int a = 0; a < 3; ++a) grid_dims_[static_cast<size_t>(a)] = a < n ? cells : 1;
  buckets_.assign(static_cast<size_t>(grid_dims_[0] * grid_dims_[1] * grid_dims_[2]), {});

  const double pad = 1e-9 * std::max(1.0, (hi - grid_lo_).norm());
  for (Index s = 0; s < simplex_count(); ++s) {
    Vec lo_s = vertex(simplices_(0, s)), hi_s = lo_s;
    for (int i = 1; i <= n; ++i) {
      lo_s = lo_s.cwiseMin(vertex(simplices_(i, s)));
      hi_s = hi_s.cwiseMax(vertex(simplices_(i, s)));
    }
    auto c0 = cell_coords(lo_s.array() - pad);
    auto c1 = cell_coords(hi_s.array() + pad);
    for (Index k = c0[2]; k <= c1[2]; ++k)
      for (Index j = c0[1]; j <= c1[1]; ++j)
        for (Index i = c0[0]; i <= c1[0]; ++i)
          buckets_[static_cast<size_t>((k * grid_dims_[1] + j) * grid_dims_[0] + i)].push_back(s);
  }
}

std::array<Index, 3> SimplicialMesh::cell_coords(const Vec& x) const {
  std::array<Index, 3> c{0, 0, 0};
  for (Index a = 0; a < x.size(); ++a) {
    double t = std::floor((x[a] - grid_lo_[a]) / grid_cell_[a]);
    c[static_cast<size_t>(a)] = std::clamp<Index>(static_cast<Index>(std::clamp(t, -1.0, 1e9)), 0,
                                                  grid_dims_[static_cast<size_t>(a)] - 1);
  }
  return c;
}

Index SimplicialMesh::bucket_of(const Vec& x) const {
  auto c = cell_coords(x);
  return (c[2] * grid_dims_[1] + c[1]) * grid_dims_[0] + c[0];
}

Index SimplicialMesh::interior_facet_count() const {
  return std::count_if(facets_.begin(), facets_.end(), [](const Facet& f) { return f.interior(); });
}

Vec SimplicialMesh::barycentric(Index s, const Vec& x) const {
  const int n = dimension();
  Vec lam(n + 1);
  lam.tail(n) = inverse_edges(s) * (x - vertex(simplices_(0, s)));
  lam[0] = 1.0 - lam.tail(n).sum();
  return lam;
}

Vec SimplicialMesh::centroid(Index s) const {
  Vec c = Vec::Zero(dimension());
  for (int i = 0; i <= dimension(); ++i) c += vertex(simplices_(i, s));
  return c / static_cast<double>(dimension() + 1);
}

double SimplicialMesh::diameter(Index s) const {
  double d = 0.0;
  for (int i = 0; i <= dimension(); ++i)
    for (int j = i + 1; j <= dimension(); ++j)
      d = std::max(d, (vertex(simplices_(i, s)) - vertex(simplices_(j, s))).norm());
  return d;
}

double SimplicialMesh::max_diameter() const {
  double d = 0.0;
  for (Index s = 0; s < simplex_count(); ++s) d = std::max(d, diameter(s));
  return d;
}

double SimplicialMesh::min_diameter() const {
  double d = std::numeric_limits<double>::infinity();
  for (Index s = 0; s < simplex_count(); ++s) d = std::min(d, diameter(s));
  return d;
}

Index SimplicialMesh::locate(const Vec& x) const {
  if (x.size() != dimension()) throw OutsideDomain("point dimension does not match the mesh");
  for (Index s : buckets_[static_cast<size_t>(bucket_of(x))])
    if (barycentric(s, x).minCoeff() >= -kContainmentTol) return s;

  // Boundary points can miss every bucket candidate by rounding; accept the
  // best simplex when the point is inside the domain up to a looser bound.
  if (!domain_.contains(x, 1e-9 * std::max(1.0, domain_.diameter())))
    throw OutsideDomain("point lies outside the domain");
  Index best = 0;
  double best_min = -std::numeric_limits<double>::infinity();
  for (Index s = 0; s < simplex_count(); ++s) {
    double m = barycentric(s, x).minCoeff();
    if (m > best_min) {
      best_min = m;
      best = s;
    }
  }
  return best;
}

Index SimplicialMesh::locate_directional(const Vec& x, const Vec& d) const {
  const int n = dimension();
  for (Index s : buckets_[static_cast<size_t>(bucket_of(x))]) {
    Vec lam = barycentric(s, x);
    if (lam.minCoeff() < -kContainmentTol) continue;
    Vec dlam(n + 1);
    dlam.tail(n) = inverse_edges(s) * d;
    dlam[0] = -dlam.tail(n).sum();
    const double dtol = 1e-12 * (1.0 + dlam.cwiseAbs().maxCoeff());
    bool inward = true;
    for (int i = 0; i <= n && inward; ++i)
      if (lam[i] <= kContainmentTol && dlam[i] < -dtol) inward = false;
    if (inward) return s;
  }
  return locate(x);
}

std::vector<Index> SimplicialMesh::candidates(const Vec& lo, const Vec& hi) const {
  auto c0 = cell_coords(lo);
  auto c1 = cell_coords(hi);
  std::vector<Index> out;
  for (Index k = c0[2]; k <= c1[2]; ++k)
    for (Index j = c0[1]; j <= c1[1]; ++j)
      for (Index i = c0[0]; i <= c1[0]; ++i) {
        const auto& b = buckets_[static_cast<size_t>((k * grid_dims_[1] + j) * grid_dims_[0] + i)];
        out.insert(out.end(), b.begin(), b.end());
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SimplicialMesh triangulate(const Domain& domain, int level) {
  if (level < 0) throw ConfigError("refinement level must be nonnegative");
  SimplicialMesh mesh = base_mesh(domain);
  for (int k = 0; k < level; ++k) mesh = refine(mesh);
  return mesh;
}

SimplicialMesh refine(const SimplicialMesh& mesh) {
  const int n = mesh.dimension();
  const Mat& V = mesh.vertices();
  const Eigen::MatrixXi& S = mesh.simplices();
  std::map<EdgeKey, int> midpoints;
  std::vector<Vec> added;
  const Index children = Index{1} << n;
  Eigen::MatrixXi out(n + 1, S.cols() * children);
  auto mid = [&](int a, int b) { return midpoint_index(midpoints, added, V, a, b); };

  for (Index s = 0; s < S.cols(); ++s) {
    const Index base = s * children;
    if (n == 1) {
      int a = S(0, s), b = S(1, s), m = mid(a, b);
      out.col(base) << a, m;
      out.col(base + 1) << m, b;
    } else if (n == 2) {
      int a = S(0, s), b = S(1, s), c = S(2, s);
      int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      out.col(base) << a, ab, ca;
      out.col(base + 1) << ab, b, bc;
      out.col(base + 2) << ca, bc, c;
      out.col(base + 3) << ab, bc, ca;
    } else {
      int x0 = S(0, s), x1 = S(1, s), x2 = S(2, s), x3 = S(3, s);
      int x01 = mid(x0, x1), x02 = mid(x0, x2), x03 = mid(x0, x3);
      int x12 = mid(x1, x2), x13 = mid(x1, x3), x23 = mid(x2, x3);
      out.col(base) << x0, x01, x02, x03;
      out.col(base + 1) << x01, x1, x12, x13;
      out.col(base + 2) << x02, x12, x2, x23;
      out.col(base + 3) << x03, x13, x23, x3;
      out.col(base + 4) << x01, x02, x03, x13;
      out.col(base + 5) << x01, x02, x12, x13;
      out.col(base + 6) << x02, x03, x13, x23;
      out.col(base + 7) << x02, x12, x13, x23;
    }
  }
  Mat verts(n, V.cols() + static_cast<Index>(added.size()));
  verts.leftCols(V.cols()) = V;
  for (size_t i = 0; i < added.size(); ++i) verts.col(V.cols() + static_cast<Index>(i)) = added[i];
  return SimplicialMesh(mesh.domain(), mesh.level() + 1, std::move(verts), std::move(out));
}

}  // namespace dcsplit
