#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "dcsplit/mesh.h"
#include "oracles.h"

using namespace dcsplit;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }
Vec v3(double x, double y, double z) { return (Vec(3) << x, y, z).finished(); }

double volume(const SimplicialMesh& m, Index s) {
  const int n = m.dimension();
  Mat e(n, n);
  for (int i = 0; i < n; ++i) e.col(i) = m.vertex(m.simplices()(i + 1, s)) - m.vertex(m.simplices()(0, s));
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return std::abs(e.determinant()) / fact;
}

double total_volume(const SimplicialMesh& m) {
  double v = 0.0;
  for (Index s = 0; s < m.simplex_count(); ++s) v += volume(m, s);
  return v;
}

Domain unit_square() { return box_domain(v2(0, 0), v2(1, 1)); }

}  // namespace

TEST_CASE("build_domain: interval, square, degenerate") {
  std::vector<Vec> pts{v1(-1), v1(1)};
  Domain d = build_domain(pts);
  CHECK(d.dimension == 1);
  CHECK(d.anchor[0] == doctest::Approx(0.0));
  CHECK(d.lower()[0] == -1.0);
  CHECK(d.upper()[0] == 1.0);

  std::vector<Vec> sq{v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)};
  Domain s = build_domain(sq);
  CHECK(s.dimension == 2);
  CHECK(s.vertices.size() == 4);
  CHECK(s.anchor[0] == doctest::Approx(0.5));
  CHECK(s.anchor[1] == doctest::Approx(0.5));
  CHECK(s.contains(v2(0.3, 0.9)));
  CHECK_FALSE(s.contains(v2(1.1, 0.5)));

  std::vector<Vec> line{v2(0, 0), v2(1, 1), v2(2, 2)};
  CHECK_THROWS_AS(build_domain(line), DegenerateDomain);
  CHECK_THROWS_AS(build_domain(sq, v2(2, 2)), AnchorOutside);
}

TEST_CASE("build_domain: interior points dropped, 3-D hull") {
  std::vector<Vec> pts{v2(0, 0), v2(2, 0), v2(0, 2), v2(0.5, 0.5), v2(1, 0)};
  Domain d = build_domain(pts);
  CHECK(d.vertices.size() == 3);

  std::vector<Vec> cube;
  for (int c = 0; c < 8; ++c) cube.push_back(v3(c & 1, (c >> 1) & 1, (c >> 2) & 1));
  cube.push_back(v3(0.5, 0.5, 0.5));
  Domain c = build_domain(cube);
  CHECK(c.dimension == 3);
  CHECK(c.vertices.size() == 8);
  CHECK(c.boundary_faces.size() == 12);
  CHECK(c.contains(v3(0.2, 0.7, 0.9)));
  CHECK_FALSE(c.contains(v3(0.2, 1.2, 0.9)));
}

TEST_CASE("triangulate: 1-D base is two cells") {
  std::vector<Vec> pts{v1(-1), v1(1)};
  SimplicialMesh m = triangulate(build_domain(pts), 0);
  CHECK(m.simplex_count() == 2);
  std::set<double> xs;
  for (Index v = 0; v < m.vertex_count(); ++v) xs.insert(m.vertex(v)[0]);
  CHECK(xs == std::set<double>{-1.0, 0.0, 1.0});
}

TEST_CASE("triangulate: unit square counts 2*4^L and volume") {
  const Domain d = unit_square();
  SimplicialMesh m0 = triangulate(d, 0);
  CHECK(m0.simplex_count() == 2);
  for (int level = 0; level <= 5; ++level) {
    SimplicialMesh m = triangulate(d, level);
    CHECK(m.simplex_count() == 2 * (1 << (2 * level)));
    CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-12));
    const Index side = (1 << level) + 1;
    CHECK(m.vertex_count() == side * side);
  }
}

TEST_CASE("refine: nesting, children tile parents, diameter halves") {
  const Domain d = unit_square();
  SimplicialMesh m = triangulate(d, 0);
  for (int step = 0; step < 3; ++step) {
    SimplicialMesh r = refine(m);
    CHECK(r.level() == m.level() + 1);
    CHECK(r.simplex_count() == 4 * m.simplex_count());
    for (Index v = 0; v < m.vertex_count(); ++v) CHECK((r.vertex(v) - m.vertex(v)).norm() == 0.0);
    for (Index s = 0; s < m.simplex_count(); ++s) {
      double child_volume = 0.0;
      for (Index c = 0; c < 4; ++c) {
        const Index child = 4 * s + c;
        child_volume += volume(r, child);
        const Vec w = oracle::barycentric(m, s, r.centroid(child));
        CHECK(w.minCoeff() > 0.0);
      }
      CHECK(child_volume == doctest::Approx(volume(m, s)).epsilon(1e-12));
    }
    m = r;
  }
  CHECK(m.max_diameter() == doctest::Approx(std::sqrt(2.0) / 8.0).epsilon(1e-14));
}

TEST_CASE("refine: 1-D keeps parent vertices") {
  std::vector<Vec> pts{v1(-1), v1(1)};
  SimplicialMesh m = triangulate(build_domain(pts), 0);
  SimplicialMesh r = refine(m);
  CHECK(r.simplex_count() == 4);
  for (Index v = 0; v < m.vertex_count(); ++v) CHECK(r.vertex(v)[0] == m.vertex(v)[0]);
}

TEST_CASE("refine: 3-D Bey refinement keeps shape regularity") {
  const Domain cube = box_domain(Vec::Zero(3), Vec::Ones(3));
  SimplicialMesh m = triangulate(cube, 0);
  CHECK(m.simplex_count() == 6);
  const double base_shape = m.shape_bound();
  for (int step = 0; step < 3; ++step) {
    m = refine(m);
    CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.shape_bound() <= 2.0 * base_shape + 1e-9);
  }
  CHECK(m.simplex_count() == 6 * 512);
}

TEST_CASE("triangulate: general polygon and polytope stay conforming") {
  std::vector<Vec> hex;
  for (int k = 0; k < 6; ++k) hex.push_back(v2(std::cos(k * M_PI / 3), std::sin(k * M_PI / 3)));
  SimplicialMesh m = triangulate(build_domain(hex), 3);
  CHECK(total_volume(m) == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0).epsilon(1e-12));
  // Conforming: each interior facet has exactly two simplices, boundary facets lie on the hull.
  for (const Facet& f : m.facets()) {
    if (f.interior()) continue;
    const Vec mid = 0.5 * (m.vertex(f.vertices[0]) + m.vertex(f.vertices[1]));
    CHECK(std::abs(m.domain().max_violation(mid)) < 1e-12);
  }

  std::vector<Vec> tet{v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)};
  SimplicialMesh t = triangulate(build_domain(tet), 2);
  CHECK(total_volume(t) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("locate: lower triangle, diagonal tie-break, outside") {
  SimplicialMesh m = triangulate(unit_square(), 0);
  const Index lower = m.locate(v2(0.25, 0.25));
  CHECK(lower == 0);
  const Index diag = m.locate(v2(0.5, 0.5));
  CHECK(diag == 0);
  CHECK(m.locate(v2(0.75, 0.75)) == 1);
  CHECK_THROWS_AS(m.locate(v2(2, 2)), OutsideDomain);
}

TEST_CASE("locate: agrees with brute-force scan") {
  SimplicialMesh m = triangulate(unit_square(), 4);
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Vec x = sample_point(m.domain(), rng);
    const Index s = m.locate(x);
    CHECK(oracle::barycentric(m, s, x).minCoeff() >= -1e-12);
    Index first = -1;
    for (Index t = 0; t < m.simplex_count() && first < 0; ++t)
      if (oracle::barycentric(m, t, x).minCoeff() >= -1e-12) first = t;
    CHECK(s == first);
  }
}

TEST_CASE("locate_directional: picks the side the direction enters") {
  SimplicialMesh m = triangulate(unit_square(), 0);
  const Vec p = v2(0.5, 0.5);
  CHECK(m.locate_directional(p, v2(-1, -1)) == 0);
  CHECK(m.locate_directional(p, v2(1, 1)) == 1);
}

TEST_CASE("probe_points: deterministic and inside") {
  const Domain d = unit_square();
  const auto a = probe_points(d, 100), b = probe_points(d, 100);
  REQUIRE(a.size() == 100);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(d.contains(a[i]));
    CHECK((a[i] - b[i]).norm() == 0.0);
  }
}
