#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dcsplit/criterion.h"
#include "oracles.h"

using namespace dcsplit;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

Domain unit_square() { return box_domain(v2(0, 0), v2(1, 1)); }

std::vector<Curve> family(const Domain& d, Index count = 8) {
  FamilySpec spec;
  spec.count = count;
  return generate_family(d, spec);
}

}  // namespace

TEST_CASE("turn_constants: closed forms and random spot checks") {
  for (double L : {0.0, 0.3, 1.0 / std::sqrt(2.0), 1.0, 3.0, 20.0}) {
    const TurnConstants k = turn_constants(L);
    CHECK(k.c4 == doctest::Approx(std::pow(1.0 + L * L, -1.5)));
    CHECK(k.c3 >= 1.0);
    CHECK(k.c3 <= 1.0 + 2.0 / (3.0 * std::sqrt(3.0)) + 1e-15);
    CHECK(k.observed_upper <= k.c3);
    CHECK(k.observed_lower >= k.c4 * (1 - 1e-12));
    // Independent random check in 3-D with arbitrary base directions.
    Rng rng(42);
    for (int i = 0; i < 2000; ++i) {
      const double a = rng.uniform(-L, L), b = rng.uniform(-L, L);
      const double t0 = rng.uniform(0, 2 * std::numbers::pi), t1 = rng.uniform(0, 2 * std::numbers::pi);
      const Eigen::Vector2d r0(std::cos(t0), std::sin(t0)), r1(std::cos(t1), std::sin(t1));
      Eigen::Vector3d u0(r0.x(), r0.y(), a), u1(r1.x(), r1.y(), b);
      const double du = (u1.normalized() - u0.normalized()).norm();
      CHECK(du <= k.c3 * ((r1 - r0).norm() + std::abs(b - a)) + 1e-12);
      CHECK(du >= k.c4 * std::abs(b - a) - 1e-12);
    }
  }
  CHECK_THROWS_AS(turn_constants(-1.0), Error);
}

TEST_CASE("stabilization verdict") {
  CriterionOptions o;
  CHECK(stabilization_verdict({1.0, 1.05}, o) == Verdict::kBounded);
  CHECK(stabilization_verdict({0.0, 0.0}, o) == Verdict::kBounded);
  CHECK(stabilization_verdict({1.0, 2.0, 4.0}, o) == Verdict::kDiverging);
  CHECK(stabilization_verdict({1.0, 1.3, 1.6}, o) == Verdict::kInconclusive);
  CHECK(stabilization_verdict({1.0}, o) == Verdict::kInconclusive);
}

TEST_CASE("f = 0: sigma <= 1, rho = 0, consistent with zero violations") {
  const Domain d = unit_square();
  const ScalarField zero(2, [](const Vec&) { return 0.0; });
  const auto fam = family(d);
  std::vector<int> levels{1, 2, 3};
  const auto [v, t] = criterion_reports(zero, d, fam, levels, {});
  CHECK(v.verdict == Verdict::kBounded);
  CHECK(t.verdict == Verdict::kBounded);
  for (const CurveRecord& r : t.records) {
    CHECK(r.ratio == 0.0);
    CHECK(r.turn_ratio <= 1.0);
    CHECK(r.turn == doctest::Approx(r.tangent_variation).epsilon(1e-12));
  }
  const ConsistencyRecord c = verdict_consistency(v, t);
  CHECK(c.consistent());
  CHECK(c.violations.empty());
  CHECK(c.checked == static_cast<Index>(t.records.size()));
}

TEST_CASE("affine: rho <= |g|, sigma within the c3 sandwich") {
  const Domain d = unit_square();
  const auto fam = family(d);
  std::vector<int> levels{1, 2, 3};
  const auto [v, t] = criterion_reports(make_catalog_field("affine"), d, fam, levels, {});
  const double g = std::sqrt(1.25);
  for (const CurveRecord& r : v.records) {
    CHECK(r.ratio <= g + 1e-12);
    CHECK(r.turn_ratio <= turn_constants(g).c3 * (1.0 + g) + 1e-12);
  }
  CHECK(v.verdict == Verdict::kBounded);
  CHECK(t.verdict == Verdict::kBounded);
}

TEST_CASE("saddle: bounded, consistent, record caps hold") {
  const Domain d = unit_square();
  const auto fam = family(d);
  std::vector<int> levels{2, 3, 4, 5};
  const auto [v, t] = criterion_reports(make_catalog_field("saddle"), d, fam, levels, {});
  CHECK(v.verdict == Verdict::kBounded);
  CHECK(t.verdict == Verdict::kBounded);
  const ConsistencyRecord c = verdict_consistency(v, t);
  CHECK(c.consistent());
  for (const CurveRecord& r : v.records) {
    const double L = v.levels[static_cast<size_t>(r.level - 2)].lipschitz;
    CHECK(std::isfinite(r.ratio));
    CHECK(std::isfinite(r.turn_ratio));
    CHECK(r.max_abs_derivative <= L + 1e-12);
    CHECK(r.max_jump <= 2 * L + 1e-12);
  }
  // Records ordered by (level, curve).
  for (size_t i = 1; i < v.records.size(); ++i)
    CHECK(std::make_pair(v.records[i - 1].level, v.records[i - 1].curve) <
          std::make_pair(v.records[i].level, v.records[i].curve));
}

TEST_CASE("osc1d in 1-D: rho matches the exact jump-sum oracle and diverges") {
  const Domain d = catalog_domain("osc1d");
  const ScalarField osc = make_catalog_field("osc1d");
  const auto fam = family(d, 4);
  std::vector<int> levels{1, 2, 3, 4, 5, 6};
  const auto [v, t] = criterion_reports(osc, d, fam, levels, {});
  CHECK(v.verdict == Verdict::kDiverging);
  CHECK(t.verdict == Verdict::kDiverging);
  for (const CurveRecord& r : v.records) {
    if (r.curve != 0) continue;
    const SimplicialMesh m = triangulate(d, r.level);
    std::vector<std::pair<double, double>> nodes;
    for (Index i = 0; i < m.vertex_count(); ++i) nodes.emplace_back(m.vertex(i)[0], osc(m.vertex(i)));
    std::sort(nodes.begin(), nodes.end());
    std::vector<double> xs, ys;
    for (auto& [x, y] : nodes) {
      xs.push_back(x);
      ys.push_back(y);
    }
    CHECK(r.derivative_variation == doctest::Approx(oracle::jump_sum(xs, ys)).epsilon(1e-12));
  }
  CHECK(v.levels.back().max_ratio >= 10.0 * v.levels.front().max_ratio);
}

TEST_CASE("osc1d embedded as f(x,y) = g(x): sigma diverges with rho") {
  const nlohmann::json two = {{"dim", 2}};
  const Domain d = catalog_domain("osc1d", two);
  const auto fam = family(d);
  std::vector<int> levels{1, 2, 3, 4, 5, 6};
  const auto [v, t] = criterion_reports(make_catalog_field("osc1d", two), d, fam, levels, {});
  CHECK(v.verdict == Verdict::kDiverging);
  CHECK(t.verdict == v.verdict);
  CHECK(verdict_consistency(v, t).consistent());
}

TEST_CASE("randomized PL fields: zero sandwich violations across 100 fields") {
  const Domain d = unit_square();
  const auto fam = family(d, 4);
  const SimplicialMesh mesh = triangulate(d, 3);
  Index checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    Vec values(mesh.vertex_count());
    const double scale = rng.uniform(0.1, 3.0);
    for (Index i = 0; i < values.size(); ++i) values[i] = scale * rng.uniform(-1, 1);
    const auto plf = std::make_shared<PLFunction>(std::make_shared<const SimplicialMesh>(mesh), values);
    const ScalarField f(2, [plf](const Vec& x) { return plf->value(x); });
    std::vector<int> levels{3};
    const auto [v, t] = criterion_reports(f, d, fam, levels, {});
    const ConsistencyRecord c = verdict_consistency(v, t);
    CHECK(c.violations.empty());
    checked += c.checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("criterion: 3-D field over lifted curves is bounded and consistent") {
  const Domain cube = box_domain(Vec::Zero(3), Vec::Ones(3));
  const ScalarField q = make_catalog_field("quadratic", {{"dim", 3}});
  FamilySpec spec;
  spec.count = 6;
  const auto fam = generate_family(cube, spec);
  std::vector<int> levels{1, 2, 3};
  const auto [v, t] = criterion_reports(q, cube, fam, levels, {});
  CHECK(verdict_consistency(v, t).violations.empty());
  for (const CurveRecord& r : v.records) CHECK(std::isfinite(r.ratio));
}

TEST_CASE("criterion: input validation") {
  const Domain d = unit_square();
  const auto fam = family(d, 2);
  std::vector<int> bad{3, 2};
  CHECK_THROWS_AS(dc_statistic(make_catalog_field("saddle"), d, fam, bad, {}), ConfigError);
  std::vector<Curve> none;
  std::vector<int> ok{1};
  CHECK_THROWS_AS(dc_statistic(make_catalog_field("saddle"), d, none, ok, {}), ConfigError);
}
