#pragma once

#include <span>
#include <vector>

#include "dcsplit/curves.h"
#include "dcsplit/field.h"
#include "dcsplit/mesh.h"
#include "dcsplit/types.h"

namespace dcsplit {

/// Constants of the turn sandwich for fields with |Phi'| <= lipschitz:
///   c4 |dPhi'| <= |d(unit lifted tangent)| <= c3 (|dr'| + |dPhi'|).
///
/// Upper: splitting the unit lifted tangent (r', Phi') / s, s = sqrt(1 + Phi'^2),
/// into its base and vertical parts gives
///   |r'_1/s_1 - r'_0/s_0| <= |r'_1 - r'_0| + |1/s_1 - 1/s_0|,
///   |theta(Phi'_1) - theta(Phi'_0)| <= |Phi'_1 - Phi'_0|,   theta(x) = x / sqrt(1+x^2),
/// and x -> 1/sqrt(1+x^2) is Lipschitz with constant
///   k(L) = L / (1+L^2)^{3/2} for L <= 1/sqrt(2), 2 / (3 sqrt 3) otherwise,
/// so c3 = 1 + k(L).
/// Lower: the vertical component of the unit tangent is theta(Phi'), and
/// theta' = (1+x^2)^{-3/2} >= (1+L^2)^{-3/2} = c4 on [-L, L].
struct TurnConstants {
  double lipschitz = 0.0;
  double c3 = 1.0;
  double c4 = 1.0;
  /// Largest observed |du| / (|dr'| + |dPhi'|) on the verification grid.
  double observed_upper = 0.0;
  /// Smallest observed |du| / |dPhi'| on the verification grid.
  double observed_lower = 0.0;
};

/// Analytic constants, checked on a grid of |a|, |b| <= L and base turning
/// angles in [0, pi] before they are returned. Throws Error if the grid
/// contradicts them.
TurnConstants turn_constants(double lipschitz, int grid = 41);

struct CurveRecord {
  int level = 0;
  Index curve = 0;
  double derivative_variation = 0.0;  // V_Phi
  double tangent_variation = 0.0;     // V_r
  double ratio = 0.0;                 // V_Phi / (1 + V_r)
  double turn = 0.0;                  // O_R
  double turn_ratio = 0.0;            // O_R / (1 + V_r)
  double max_abs_derivative = 0.0;
  double max_jump = 0.0;
  Index breakpoints = 0;
};

struct LevelAggregate {
  int level = 0;
  double max_ratio = 0.0;
  double max_turn_ratio = 0.0;
  double lipschitz = 0.0;
  TurnConstants constants;
};

enum class Statistic { kVariation, kTurn };

struct CriterionOptions {
  /// Bounded when the tracked maximum changes by less than this fraction
  /// between the last two levels.
  double stabilization = 0.1;
  /// Diverging when it grows at least this factor per level on average ...
  double growth = 1.5;
  /// ... for this many consecutive level steps.
  int growth_steps = 2;
};

struct CriterionReport {
  Statistic statistic = Statistic::kVariation;
  std::vector<CurveRecord> records;  // ordered by (level, curve)
  std::vector<LevelAggregate> levels;
  Verdict verdict = Verdict::kInconclusive;
  CriterionOptions options;
};

/// Per-curve records for every level, traced on the PL interpolant.
std::vector<CurveRecord> criterion_records(const ScalarField& field, const Domain& domain,
                                           std::span<const Curve> family, std::span<const int> levels,
                                           std::vector<LevelAggregate>* aggregates = nullptr);

/// Bounded / diverging / inconclusive from a per-level sequence of maxima.
Verdict stabilization_verdict(const std::vector<double>& maxima, const CriterionOptions& options);

CriterionReport dc_statistic(const ScalarField& field, const Domain& domain, std::span<const Curve> family,
                             std::span<const int> levels, const CriterionOptions& options = {});
CriterionReport turn_statistic(const ScalarField& field, const Domain& domain, std::span<const Curve> family,
                               std::span<const int> levels, const CriterionOptions& options = {});

/// Both statistics from a single pass over the traces.
std::pair<CriterionReport, CriterionReport> criterion_reports(const ScalarField& field, const Domain& domain,
                                                              std::span<const Curve> family,
                                                              std::span<const int> levels,
                                                              const CriterionOptions& options = {});

struct SandwichViolation {
  int level = 0;
  Index curve = 0;
  double lower_excess = 0.0;  // (c4 V_Phi - c3 V_r) - O_R, relative
  double upper_excess = 0.0;  // O_R - c3 (V_r + V_Phi), relative
};

struct ConsistencyRecord {
  bool verdicts_match = false;
  std::vector<SandwichViolation> violations;
  Index checked = 0;
  bool consistent() const { return verdicts_match && violations.empty(); }
};

ConsistencyRecord verdict_consistency(const CriterionReport& variation, const CriterionReport& turn,
                                      double rel_tol = 1e-6);

}  // namespace dcsplit
