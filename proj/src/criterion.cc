#include "dcsplit/criterion.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "dcsplit/dc_decompose.h"
#include "dcsplit/parallel.h"
#include "dcsplit/pl_function.h"

namespace dcsplit {

namespace {

Eigen::Vector3d unit_lifted(double angle, double slope) {
  return Eigen::Vector3d(std::cos(angle), std::sin(angle), slope) / std::sqrt(1.0 + slope * slope);
}

}  // namespace

TurnConstants turn_constants(double lipschitz, int grid) {
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw Error("turn constants need a finite Lipschitz bound");
  TurnConstants k;
  k.lipschitz = lipschitz;
  const double L = lipschitz;
  const double knee = 1.0 / std::sqrt(2.0);
  const double h_lip = L <= knee ? L / std::pow(1.0 + L * L, 1.5) : 2.0 / (3.0 * std::sqrt(3.0));
  k.c3 = 1.0 + h_lip;
  k.c4 = std::pow(1.0 + L * L, -1.5);

  // Brute-force check. Only the angle between the two base directions
  // matters, so a planar base suffices.
  k.observed_upper = 0.0;
  k.observed_lower = std::numeric_limits<double>::infinity();
  const int angles = std::max(3, grid - 8);
  for (int i = 0; i < grid; ++i) {
    const double a = grid > 1 ? -L + 2.0 * L * i / (grid - 1) : 0.0;
    for (int j = 0; j < grid; ++j) {
      const double b = grid > 1 ? -L + 2.0 * L * j / (grid - 1) : 0.0;
      for (int t = 0; t < angles; ++t) {
        const double phi = std::numbers::pi * t / (angles - 1);
        const double du = (unit_lifted(phi, b) - unit_lifted(0.0, a)).norm();
        const double dr = Eigen::Vector2d(std::cos(phi) - 1.0, std::sin(phi)).norm();
        const double dphi = std::abs(b - a);
        if (dr + dphi > 0.0) k.observed_upper = std::max(k.observed_upper, du / (dr + dphi));
        if (dphi > 0.0) k.observed_lower = std::min(k.observed_lower, du / dphi);
      }
    }
  }
  if (!std::isfinite(k.observed_lower)) k.observed_lower = 1.0;
  if (k.observed_upper > k.c3 * (1.0 + 1e-12))
    throw Error("turn constant c3 contradicted by the verification grid");
  if (k.observed_lower < k.c4 * (1.0 - 1e-12))
    throw Error("turn constant c4 contradicted by the verification grid");
  return k;
}

std::vector<CurveRecord> criterion_records(const ScalarField& field, const Domain& domain,
                                           std::span<const Curve> family, std::span<const int> levels,
                                           std::vector<LevelAggregate>* aggregates) {
  if (family.empty()) throw ConfigError("criterion needs a nonempty curve family");
  if (levels.empty() || !std::is_sorted(levels.begin(), levels.end()) ||
      std::adjacent_find(levels.begin(), levels.end()) != levels.end() || levels.front() < 0)
    throw ConfigError("criterion levels must be nonnegative and strictly ascending");

  std::vector<CurveRecord> records;
  std::shared_ptr<const SimplicialMesh> mesh;
  for (int level : levels) {
    if (!mesh) {
      mesh = std::make_shared<const SimplicialMesh>(triangulate(domain, level));
    } else {
      while (mesh->level() < level) mesh = std::make_shared<const SimplicialMesh>(refine(*mesh));
    }
    const PLFunction plf = interpolate(field, mesh);
    LevelAggregate agg;
    agg.level = level;
    agg.lipschitz = lipschitz_estimate(plf);
    agg.constants = turn_constants(agg.lipschitz);

    std::vector<CurveRecord> level_records(family.size());
    parallel_for(static_cast<Index>(family.size()), [&](Index c) {
      const Curve& curve = family[static_cast<size_t>(c)];
      const Trace tr = trace(plf, curve);
      CurveRecord r;
      r.level = level;
      r.curve = c;
      r.derivative_variation = derivative_variation(tr);
      r.tangent_variation = tangent_variation(curve);
      r.ratio = r.derivative_variation / (1.0 + r.tangent_variation);
      r.turn = turn(lift(tr));
      r.turn_ratio = r.turn / (1.0 + r.tangent_variation);
      r.max_abs_derivative = tr.derivatives.cwiseAbs().maxCoeff();
      for (Index j = 0; j + 1 < tr.interval_count(); ++j)
        r.max_jump = std::max(r.max_jump, std::abs(tr.derivatives[j + 1] - tr.derivatives[j]));
      r.breakpoints = tr.breakpoints.size();
      level_records[static_cast<size_t>(c)] = r;
    });
    for (const CurveRecord& r : level_records) {
      agg.max_ratio = std::max(agg.max_ratio, r.ratio);
      agg.max_turn_ratio = std::max(agg.max_turn_ratio, r.turn_ratio);
      records.push_back(r);
    }
    if (aggregates) aggregates->push_back(agg);
  }
  return records;
}

Verdict stabilization_verdict(const std::vector<double>& maxima, const CriterionOptions& options) {
  const size_t m = maxima.size();
  if (m < 2) return Verdict::kInconclusive;
  if (sustained_growth(maxima, options.growth, options.growth_steps)) return Verdict::kDiverging;
  const double last = maxima[m - 1], prev = maxima[m - 2];
  if (std::max(last, prev) <= 1e-12) return Verdict::kBounded;
  if (std::abs(last - prev) < options.stabilization * prev) return Verdict::kBounded;
  return Verdict::kInconclusive;
}

std::pair<CriterionReport, CriterionReport> criterion_reports(const ScalarField& field, const Domain& domain,
                                                              std::span<const Curve> family,
                                                              std::span<const int> levels,
                                                              const CriterionOptions& options) {
  CriterionReport variation;
  variation.statistic = Statistic::kVariation;
  variation.options = options;
  variation.records = criterion_records(field, domain, family, levels, &variation.levels);

  std::vector<double> max_ratio, max_turn;
  for (const auto& agg : variation.levels) {
    max_ratio.push_back(agg.max_ratio);
    max_turn.push_back(agg.max_turn_ratio);
  }
  variation.verdict = stabilization_verdict(max_ratio, options);

  CriterionReport turn_report = variation;
  turn_report.statistic = Statistic::kTurn;
  turn_report.verdict = stabilization_verdict(max_turn, options);
  return {std::move(variation), std::move(turn_report)};
}

CriterionReport dc_statistic(const ScalarField& field, const Domain& domain, std::span<const Curve> family,
                             std::span<const int> levels, const CriterionOptions& options) {
  return criterion_reports(field, domain, family, levels, options).first;
}

CriterionReport turn_statistic(const ScalarField& field, const Domain& domain, std::span<const Curve> family,
                               std::span<const int> levels, const CriterionOptions& options) {
  return criterion_reports(field, domain, family, levels, options).second;
}

ConsistencyRecord verdict_consistency(const CriterionReport& variation, const CriterionReport& turn_report,
                                      double rel_tol) {
  ConsistencyRecord out;
  out.verdicts_match = variation.verdict == turn_report.verdict;
  auto constants_at = [&](int level) -> const TurnConstants& {
    for (const auto& agg : turn_report.levels)
      if (agg.level == level) return agg.constants;
    throw Error("consistency check: no constants for level " + std::to_string(level));
  };
  for (const CurveRecord& r : turn_report.records) {
    const TurnConstants& k = constants_at(r.level);
    const double upper = k.c3 * (r.tangent_variation + r.derivative_variation);
    const double lower = k.c4 * r.derivative_variation - k.c3 * r.tangent_variation;
    const double scale = 1.0 + r.turn + upper;
    SandwichViolation v;
    v.level = r.level;
    v.curve = r.curve;
    v.lower_excess = (lower - r.turn) / scale;
    v.upper_excess = (r.turn - upper) / scale;
    if (v.lower_excess > rel_tol || v.upper_excess > rel_tol) out.violations.push_back(v);
    ++out.checked;
  }
  return out;
}

}  // namespace dcsplit
