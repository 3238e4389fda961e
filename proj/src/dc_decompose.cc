#include "dcsplit/dc_decompose.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dcsplit/parallel.h"
#include "dcsplit/rng.h"

namespace dcsplit {

WedgeFunction wedge(const Hinge& hinge) {
  if (hinge.kind != HingeKind::kConvex)
    throw NotConvexHinge("facet " + std::to_string(hinge.facet) + " is " + to_string(hinge.kind) +
                         ", only convex hinges extend to wedges");
  return WedgeFunction{hinge.facet, hinge.gradient_k, hinge.offset_k, hinge.gradient_l, hinge.offset_l};
}

ConvexSum::ConvexSum(int dimension, std::vector<WedgeFunction> wedges, AffineNormalization normalization,
                     const Vec& anchor)
    : dimension_(dimension), wedges_(std::move(wedges)), normalization_(normalization) {
  const Index m = static_cast<Index>(wedges_.size());
  ridge_gradients_.resize(m, dimension_);
  ridge_offsets_.resize(m);
  mean_gradient_ = Vec::Zero(dimension_);
  mean_offset_ = 0.0;
  for (Index i = 0; i < m; ++i) {
    const WedgeFunction& w = wedges_[static_cast<size_t>(i)];
    ridge_gradients_.row(i) = (w.gradient_l - w.gradient_k).transpose();
    ridge_offsets_[i] = w.offset_l - w.offset_k;
    mean_gradient_ += 0.5 * (w.gradient_k + w.gradient_l);
    mean_offset_ += 0.5 * (w.offset_k + w.offset_l);
  }
  if (normalization_ == AffineNormalization::kBalanced) {
    affine_gradient_ = mean_gradient_;
    affine_offset_ = mean_offset_;
  } else {
    affine_gradient_ = Vec::Zero(dimension_);
    affine_offset_ = 0.0;
  }
  shift_ = 0.0;
  shift_ = value(anchor);
}

double ConvexSum::half_abs_sum(const Vec& x) const {
  if (ridge_offsets_.size() == 0) return 0.0;
  return 0.5 * (ridge_gradients_ * x + ridge_offsets_).cwiseAbs().sum();
}

double ConvexSum::value(const Vec& x) const {
  // max(p, q) = (p + q) / 2 + |p - q| / 2; in balanced mode the mean planes
  // cancel against the removed affine part exactly, so skip them.
  double v = half_abs_sum(x) - shift_;
  if (normalization_ == AffineNormalization::kAnchorConstant) v += mean_gradient_.dot(x) + mean_offset_;
  return v;
}

double ConvexSum::directional_derivative(const Vec& x, const Vec& d) const {
  double total = 0.0;
  const double xn = x.norm();
  for (Index i = 0; i < ridge_offsets_.size(); ++i) {
    const double r = ridge_gradients_.row(i).dot(x) + ridge_offsets_[i];
    const double dr = ridge_gradients_.row(i).dot(d);
    const double tol = 1e-13 * (1.0 + ridge_gradients_.row(i).norm() * xn + std::abs(ridge_offsets_[i]));
    if (r > tol) {
      total += 0.5 * dr;
    } else if (r < -tol) {
      total -= 0.5 * dr;
    } else {
      total += 0.5 * std::abs(dr);
    }
  }
  if (normalization_ == AffineNormalization::kAnchorConstant) total += mean_gradient_.dot(d);
  return total;
}

std::vector<double> ConvexSum::kinks(const Vec& p, const Vec& q) const {
  std::vector<double> out;
  if (ridge_offsets_.size() == 0) return out;
  const Vec rp = ridge_gradients_ * p + ridge_offsets_;
  const Vec rq = ridge_gradients_ * q + ridge_offsets_;
  for (Index i = 0; i < rp.size(); ++i) {
    if ((rp[i] < 0.0 && rq[i] > 0.0) || (rp[i] > 0.0 && rq[i] < 0.0)) {
      double s = rp[i] / (rp[i] - rq[i]);
      if (s > 0.0 && s < 1.0) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DCPair::DCPair(ConvexSum f1, PLFunction source, Vec anchor)
    : f1_(std::move(f1)), source_(std::move(source)), anchor_(std::move(anchor)) {
  anchor_value_ = source_.value(anchor_);
}

namespace {

Mat flattened(const DCPair& pair, bool second) {
  const SimplicialMesh& mesh = pair.source().mesh();
  if (mesh.dimension() != 1) throw Error("exact flattening is only available in 1-D");
  const Index v = mesh.vertex_count();
  std::vector<Index> order(static_cast<size_t>(v));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return mesh.vertices()(0, a) < mesh.vertices()(0, b); });
  Mat out(2, v);
  for (Index i = 0; i < v; ++i) {
    const Index idx = order[static_cast<size_t>(i)];
    const Vec x = mesh.vertex(idx);
    out(0, i) = x[0];
    const double f1 = pair.f1(x);
    out(1, i) = second ? f1 - (pair.source().vertex_values()[idx] - pair.anchor_value()) : f1;
  }
  return out;
}

}  // namespace

Mat DCPair::flattened_f1() const { return flattened(*this, false); }
Mat DCPair::flattened_f2() const { return flattened(*this, true); }

DCPair decompose(const PLFunction& f, const Vec& anchor, const DecomposeOptions& options) {
  std::vector<WedgeFunction> wedges;
  std::array<Index, 3> counts{0, 0, 0};
  for (const Hinge& h : hinges(f, options.hinge_tol)) {
    ++counts[static_cast<size_t>(h.kind)];
    if (h.kind == HingeKind::kConvex) wedges.push_back(wedge(h));
  }
  ConvexSum f1(f.dimension(), std::move(wedges), options.normalization, anchor);
  DCPair pair(std::move(f1), f, anchor);
  pair.set_hinge_counts(counts);
  return pair;
}

ConvexityReport convexity_check(const std::function<double(const Vec&)>& fn, const Domain& domain, Index samples,
                                std::uint64_t seed) {
  if (samples < 1) throw ConfigError("convexity_check needs at least one sample");
  Rng rng(seed);
  ConvexityReport report;
  report.samples = samples;
  for (Index i = 0; i < samples; ++i) {
    Vec x = sample_point(domain, rng);
    Vec y = sample_point(domain, rng);
    const double violation = fn(0.5 * (x + y)) - 0.5 * (fn(x) + fn(y));
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.witness_x = std::move(x);
      report.witness_y = std::move(y);
    }
  }
  return report;
}

double reconstruction_residual(const DCPair& pair, const Domain& domain, Index samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (Index i = 0; i < samples; ++i) {
    const Vec x = sample_point(domain, rng);
    const double fn = pair.fN(x);
    const double r = std::abs(pair.f1(x) - pair.f2(x) - (fn - pair.anchor_value())) / (1.0 + std::abs(fn));
    worst = std::max(worst, r);
  }
  return worst;
}

bool sustained_growth(const std::vector<double>& values, double growth, int steps) {
  const size_t m = values.size();
  const size_t n = static_cast<size_t>(std::max(1, steps));
  if (m <= n || !(values[m - 1 - n] > 0.0)) return false;
  for (size_t k = m - n; k < m; ++k)
    if (!(values[k] > values[k - 1])) return false;
  return values[m - 1] >= std::pow(growth, static_cast<double>(n)) * values[m - 1 - n];
}

Verdict convergence_verdict(const std::vector<double>& sup_deltas, const std::vector<double>& sup_norms,
                            double field_range, const ConvergeOptions& options) {
  if (sup_deltas.empty()) return Verdict::kInconclusive;
  const double scale = 1.0 + (sup_norms.empty() ? 0.0 : *std::max_element(sup_norms.begin(), sup_norms.end()));
  if (std::all_of(sup_deltas.begin(), sup_deltas.end(), [&](double d) { return d <= 1e-13 * scale; }))
    return Verdict::kConverging;

  const size_t m = sup_deltas.size();
  const bool settling = m < 2 || sup_deltas[m - 1] <= sup_deltas[m - 2];
  if (settling && sup_deltas[m - 1] < options.convergence_fraction * field_range) return Verdict::kConverging;

  if (sustained_growth(sup_norms, options.growth, options.growth_steps)) return Verdict::kDiverging;
  return Verdict::kInconclusive;
}

ConvergenceReport converge(const ScalarField& field, const Domain& domain, int min_level, int max_level,
                           Index probe_count, const ConvergeOptions& options) {
  if (min_level < 0 || min_level >= max_level) throw ConfigError("converge needs 0 <= min_level < max_level");
  ConvergenceReport report;
  report.probes = probe_points(domain, probe_count);
  const Index p = static_cast<Index>(report.probes.size());

  Vec field_values(p);
  parallel_for(p, [&](Index i) { field_values[i] = field(report.probes[static_cast<size_t>(i)]); });
  report.field_range = p > 0 ? field_values.maxCoeff() - field_values.minCoeff() : 0.0;

  std::shared_ptr<const SimplicialMesh> mesh;
  Vec previous;
  for (int level = min_level; level <= max_level; ++level) {
    mesh = level == min_level ? std::make_shared<const SimplicialMesh>(triangulate(domain, level))
                              : std::make_shared<const SimplicialMesh>(refine(*mesh));
    PLFunction plf = interpolate(field, mesh);
    DCPair pair = decompose(plf, domain.anchor, options.decompose);

    Vec current(p);
    parallel_for(p, [&](Index i) { current[i] = pair.f1(report.probes[static_cast<size_t>(i)]); });
    report.levels.push_back(level);
    report.sup_norms.push_back(p > 0 ? current.cwiseAbs().maxCoeff() : 0.0);
    report.convex_hinges.push_back(pair.hinge_counts()[0]);
    if (previous.size() == current.size() && level > min_level)
      report.sup_deltas.push_back(p > 0 ? (current - previous).cwiseAbs().maxCoeff() : 0.0);
    previous = std::move(current);
    if (level == max_level) {
      report.reconstruction_residual = reconstruction_residual(pair, domain, options.residual_samples, options.seed);
      report.final_pair.emplace(std::move(pair));
    }
  }
  report.verdict = convergence_verdict(report.sup_deltas, report.sup_norms, report.field_range, options);
  return report;
}

}  // namespace dcsplit
