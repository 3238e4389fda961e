#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dcsplit/field.h"
#include "dcsplit/mesh.h"
#include "dcsplit/pl_function.h"
#include "dcsplit/types.h"

namespace dcsplit {

/// A convex hinge extended to the whole domain:
/// x -> max(<g_k, x> + b_k, <g_l, x> + b_l).
struct WedgeFunction {
  Index facet = 0;
  Vec gradient_k;
  double offset_k = 0.0;
  Vec gradient_l;
  double offset_l = 0.0;

  double value(const Vec& x) const {
    return std::max(gradient_k.dot(x) + offset_k, gradient_l.dot(x) + offset_l);
  }
};

/// Throws NotConvexHinge unless hinge.kind is convex.
WedgeFunction wedge(const Hinge& hinge);

/// Which affine part is removed from the wedge sum.
enum class AffineNormalization {
  /// Only the constant: f1(a) = 0.
  kAnchorConstant,
  /// Also the mean plane of every wedge, i.e. each wedge contributes
  /// |<g_l - g_k, x> + b_l - b_k| / 2. Keeps f1 bounded under refinement
  /// where the raw wedge sum picks up an affine drift.
  kBalanced,
};

/// sum_i wedge_i(x) - <affine_gradient, x> - affine_offset - shift.
class ConvexSum {
 public:
  ConvexSum(int dimension, std::vector<WedgeFunction> wedges, AffineNormalization normalization,
            const Vec& anchor);

  int dimension() const { return dimension_; }
  const std::vector<WedgeFunction>& wedges() const { return wedges_; }
  AffineNormalization normalization() const { return normalization_; }
  const Vec& affine_gradient() const { return affine_gradient_; }
  double affine_offset() const { return affine_offset_; }
  double shift() const { return shift_; }

  double value(const Vec& x) const;
  double operator()(const Vec& x) const { return value(x); }

  /// Exact one-sided derivative along d, summed from each wedge.
  double directional_derivative(const Vec& x, const Vec& d) const;

  /// Parameters s in (0,1) where p + s (q - p) crosses a wedge ridge.
  std::vector<double> kinks(const Vec& p, const Vec& q) const;

 private:
  double half_abs_sum(const Vec& x) const;

  int dimension_;
  std::vector<WedgeFunction> wedges_;
  AffineNormalization normalization_;
  // Row i holds (g_l - g_k) of wedge i; ridge_offsets_ the matching b_l - b_k.
  Mat ridge_gradients_;
  Vec ridge_offsets_;
  // Sum of wedge mean planes, (g_k + g_l) / 2 and (b_k + b_l) / 2.
  Vec mean_gradient_;
  double mean_offset_ = 0.0;
  Vec affine_gradient_;
  double affine_offset_ = 0.0;
  double shift_ = 0.0;
};

struct DecomposeOptions {
  AffineNormalization normalization = AffineNormalization::kBalanced;
  double hinge_tol = kHingeTol;
};

/// f_N = f1 - f2 + f_N(a) with f1, f2 convex and f1(a) = f2(a) = 0.
class DCPair {
 public:
  DCPair(ConvexSum f1, PLFunction source, Vec anchor);

  const ConvexSum& convex_sum() const { return f1_; }
  const PLFunction& source() const { return source_; }
  const Vec& anchor() const { return anchor_; }
  /// f_N(a).
  double anchor_value() const { return anchor_value_; }

  double f1(const Vec& x) const { return f1_.value(x); }
  double f2(const Vec& x) const { return f1_.value(x) - (source_.value(x) - anchor_value_); }
  double fN(const Vec& x) const { return source_.value(x); }

  double f2_directional_derivative(const Vec& x, const Vec& d) const {
    return f1_.directional_derivative(x, d) - source_.directional_derivative(x, d);
  }

  /// 1-D only: 2 x V matrix of (vertex coordinate, value), sorted by
  /// coordinate. In 1-D f1 kinks only at mesh vertices, so these samples
  /// determine f1 and f2 exactly.
  Mat flattened_f1() const;
  Mat flattened_f2() const;

  /// Counts of convex / concave / flat hinges of the source.
  std::array<Index, 3> hinge_counts() const { return hinge_counts_; }
  void set_hinge_counts(std::array<Index, 3> c) { hinge_counts_ = c; }

 private:
  ConvexSum f1_;
  PLFunction source_;
  Vec anchor_;
  double anchor_value_;
  std::array<Index, 3> hinge_counts_{0, 0, 0};
};

DCPair decompose(const PLFunction& f, const Vec& anchor, const DecomposeOptions& options = {});

struct ConvexityReport {
  Index samples = 0;
  /// max of fn((x+y)/2) - (fn(x)+fn(y))/2 over sampled pairs.
  double max_violation = -std::numeric_limits<double>::infinity();
  Vec witness_x;
  Vec witness_y;
  bool passed(double tol) const { return max_violation <= tol; }
};

ConvexityReport convexity_check(const std::function<double(const Vec&)>& fn, const Domain& domain, Index samples,
                                std::uint64_t seed);

/// max |f1 - f2 - (f_N - f_N(a))| over sampled points, relative to 1 + |f_N|.
double reconstruction_residual(const DCPair& pair, const Domain& domain, Index samples, std::uint64_t seed);

struct ConvergeOptions {
  DecomposeOptions decompose;
  /// Converging when the last sup-delta is below this fraction of the
  /// field's range on the probe grid (and deltas are non-increasing).
  double convergence_fraction = 1e-2;
  /// Diverging when sup|f1| grows at least this factor per level ...
  double growth = 1.5;
  /// ... across this many consecutive level steps.
  int growth_steps = 2;
  Index residual_samples = 2000;
  std::uint64_t seed = 1;
};

struct ConvergenceReport {
  std::vector<int> levels;
  /// sup over probes of |f1_{k+1} - f1_k|; size levels - 1.
  std::vector<double> sup_deltas;
  /// sup over probes of |f1_k|.
  std::vector<double> sup_norms;
  std::vector<Index> convex_hinges;
  double field_range = 0.0;
  double reconstruction_residual = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  std::vector<Vec> probes;
  std::optional<DCPair> final_pair;
};

/// True when the last `steps` level steps of `values` all increase and their
/// combined factor is at least growth^steps.
bool sustained_growth(const std::vector<double>& values, double growth, int steps);

Verdict convergence_verdict(const std::vector<double>& sup_deltas, const std::vector<double>& sup_norms,
                            double field_range, const ConvergeOptions& options);

ConvergenceReport converge(const ScalarField& field, const Domain& domain, int min_level, int max_level,
                           Index probe_count, const ConvergeOptions& options = {});

}  // namespace dcsplit
